#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <random>

#include <ttx/census.hpp>
#include <ttx/json_io.hpp>

#include "oracle.hpp"

using namespace ttx;

TEST_CASE( "function space sizes" )
{
  CHECK( function_space_size( 1 ) == 2 );
  CHECK( function_space_size( 2 ) == 14 );
  CHECK( function_space_size( 3 ) == 254 );
  CHECK( function_space_size( 4 ) == 65534 );
  CHECK( function_space_size( 5 ) == 4294967294ull );
  CHECK_THROWS_AS( function_space_size( 6 ), std::invalid_argument );
  CHECK_THROWS_AS( function_space_size( 0 ), std::invalid_argument );
}

TEST_CASE( "function indexing" )
{
  CHECK( function_at( 2, 1 ).bit_string() == "0001" );
  CHECK( function_at( 2, 2 ).bit_string() == "0010" );
  CHECK( function_at( 2, 14 ).bit_string() == "1110" );
  CHECK( function_at( 4, 26624 ).bit_string() == "0110100000000000" ); // the running example
  CHECK_THROWS_AS( function_at( 2, 0 ), std::out_of_range );
  CHECK_THROWS_AS( function_at( 2, 15 ), std::out_of_range ); // the constant-1 function

  // every index yields a distinct non-constant table
  for ( uint64_t n = 1; n <= 14; ++n )
  {
    CHECK( !function_at( 2, n ).is_constant() );
  }
}

TEST_CASE( "exhaustive enumerator yields the whole domain in order" )
{
  function_enumerator functions( 3, census_mode::exhaustive );
  CHECK( functions.count() == 254 );
  uint64_t n = 0;
  while ( auto t = functions.next() )
  {
    ++n;
    CHECK( *t == function_at( 3, n ) );
  }
  CHECK( n == 254 );
  CHECK( !functions.next().has_value() );
  CHECK( functions.indices().size() == 254 );
  CHECK( functions.indices().front() == 1 );
  CHECK( functions.indices().back() == 254 );

  CHECK_THROWS_AS( function_enumerator( 5, census_mode::exhaustive ), std::invalid_argument );
}

TEST_CASE( "sampled enumeration is seeded, uniform-range and without replacement" )
{
  function_enumerator a( 4, census_mode::sampled, 99, 500 );
  function_enumerator b( 4, census_mode::sampled, 99, 500 );
  function_enumerator c( 4, census_mode::sampled, 100, 500 );
  const auto ia = a.indices(), ib = b.indices(), ic = c.indices();
  CHECK( ia == ib );      // same seed, same draw
  CHECK( ia != ic );      // different seed, different draw
  CHECK( ia.size() == 500 );

  std::vector<uint64_t> sorted = ia;
  std::sort( sorted.begin(), sorted.end() );
  CHECK( std::adjacent_find( sorted.begin(), sorted.end() ) == sorted.end() ); // distinct
  CHECK( sorted.front() >= 1 );
  CHECK( sorted.back() <= 65534 );

  CHECK_THROWS_AS( function_enumerator( 4, census_mode::sampled, 1, 0 ), std::invalid_argument );
  CHECK_THROWS_AS( function_enumerator( 2, census_mode::sampled, 1, 15 ), std::invalid_argument );
  CHECK( function_enumerator( 5, census_mode::sampled, 1, 10 ).count() == 10 );
  CHECK_THROWS_AS( function_enumerator( 6, census_mode::sampled, 1, 10 ), std::invalid_argument );
}

TEST_CASE( "per-function audits" )
{
  const truth_table fig1 = parse_truth_table( "tt 4\n0110100000000000\n" );
  const function_audit audit = audit_function( fig1 );
  CHECK( audit.instances.size() == 16 );
  CHECK( audit.flags[4] ); // some instance exhibits the dominating irrelevant feature
  CHECK( audit.flags[0] );
  for ( uint64_t row = 1; row <= 16; ++row )
  {
    CHECK( audit.instances[row - 1].instance_row == row );
  }

  const function_audit dictator = audit_function( truth_table( 2, { 0, 0, 1, 1 } ) );
  CHECK( dictator.flags == std::array<bool, 7>{} );

  const function_audit parity = audit_function( truth_table( 2, { 0, 1, 1, 0 } ) );
  CHECK( parity.flags == std::array<bool, 7>{} );

  CHECK_THROWS_AS( audit_function( truth_table( 2, { 1, 1, 1, 1 } ) ), constant_function_error );
}

TEST_CASE( "two-feature census agrees with a from-scratch reference, record for record" )
{
  // reference tallies computed with the oracle implementations only
  std::array<issue_tally, num_issues> expected{};
  uint64_t expected_functions = 0;
  for ( uint64_t n = 1; n <= 14; ++n )
  {
    const truth_table t = function_at( 2, n );
    std::array<bool, num_issues> function_flags{};
    for ( const point& v : all_points( 2 ) )
    {
      const auto flags = oracle::issue_flags( 2, oracle::relevant_features( t, v ),
                                              oracle::shapley_by_orderings( t, v ) );
      for ( int k = 0; k < num_issues; ++k )
      {
        if ( flags[k] )
        {
          function_flags[k] = true;
          ++expected[k].instances;
          ++( eval( t, v ) ? expected[k].class1 : expected[k].class0 );
        }
      }
    }
    ++expected_functions;
    for ( int k = 0; k < num_issues; ++k )
    {
      expected[k].functions += function_flags[k];
    }
  }

  census_config config;
  config.num_features = 2;
  std::vector<std::pair<std::string, uint64_t>> streamed;
  config.instance_sink = [&]( const audit_record& r ) {
    streamed.emplace_back( r.function_bits, r.instance_row );
  };
  const census_stats stats = run_census( config );

  CHECK( stats.functions_audited == expected_functions );
  CHECK( stats.instances_audited == 56 );
  CHECK( stats.issues == expected );
  CHECK( stats.implication_violations == 0 );

  // streaming order: ascending function index, rows 1..4 within each function
  REQUIRE( streamed.size() == 56 );
  for ( uint64_t n = 1; n <= 14; ++n )
  {
    for ( uint64_t row = 1; row <= 4; ++row )
    {
      const auto& [bits, streamed_row] = streamed[( n - 1 ) * 4 + ( row - 1 )];
      CHECK( bits == function_at( 2, n ).bit_string() );
      CHECK( streamed_row == row );
    }
  }
}

TEST_CASE( "census statistics are worker-count independent" )
{
  census_stats reference;
  for ( int workers : { 1, 3, 8 } )
  {
    census_config config;
    config.num_features = 3;
    config.workers = workers;
    const census_stats stats = run_census( config );
    CHECK( stats.functions_audited == 254 );
    CHECK( stats.instances_audited == 2032 );
    CHECK( stats.implication_violations == 0 );
    CHECK( parity_report( stats ).all_equal );
    if ( workers == 1 )
    {
      reference = stats;
    }
    else
    {
      CHECK( stats.issues == reference.issues );
      CHECK( census_stats_json( stats ) == census_stats_json( reference ) );
      CHECK( census_stats_json( stats ).dump() == census_stats_json( reference ).dump() );
    }
  }
}

TEST_CASE( "instance stream is identical no matter the worker count" )
{
  const auto collect = [&]( int workers ) {
    census_config config;
    config.num_features = 2;
    config.workers = workers;
    config.checkpoint_interval = 3; // exercise several blocks
    std::vector<uint64_t> rows;
    config.instance_sink = [&]( const audit_record& r ) { rows.push_back( r.instance_row ); };
    run_census( config );
    return rows;
  };
  CHECK( collect( 1 ) == collect( 4 ) );
}

TEST_CASE( "checkpointing: interrupt, resume, and reject mismatches" )
{
  const std::string path = "ttx_test_checkpoint.json";
  std::remove( path.c_str() );

  census_config config;
  config.num_features = 3;
  const census_stats whole = run_census( config );

  config.checkpoint_path = path;
  config.checkpoint_interval = 50;
  struct interrupt
  {
  };
  uint64_t seen = 0;
  config.instance_sink = [&]( const audit_record& ) {
    if ( ++seen == 60 * 8 )
    {
      throw interrupt{};
    }
  };
  CHECK_THROWS_AS( run_census( config ), interrupt );

  config.instance_sink = nullptr;
  const census_stats resumed = run_census( config );
  CHECK( resumed.issues == whole.issues );
  CHECK( resumed.functions_audited == whole.functions_audited );
  CHECK( census_stats_json( resumed ).dump() == census_stats_json( whole ).dump() );

  // a checkpoint from different parameters must not be resumed
  census_config other = config;
  other.num_features = 2;
  CHECK_THROWS_AS( run_census( other ), checkpoint_mismatch_error );
  census_config reseeded = config;
  reseeded.mode = census_mode::sampled;
  reseeded.sample_count = 10;
  CHECK_THROWS_AS( run_census( reseeded ), checkpoint_mismatch_error );

  // corrupted checkpoint contents are rejected too
  {
    std::ofstream out( path, std::ios::trunc );
    out << "{ not json";
  }
  CHECK_THROWS_AS( run_census( config ), checkpoint_mismatch_error );
  std::remove( path.c_str() );
}

TEST_CASE( "percent formatting rounds half-up to tenths" )
{
  CHECK( census_stats::pct_tenths( 1248, 65534 ) == 19 );
  CHECK( census_stats::pct_string( 1248, 65534 ) == "1.9" );
  CHECK( census_stats::pct_string( 65320, 65534 ) == "99.7" );
  CHECK( census_stats::pct_string( 0, 10 ) == "0.0" );
  CHECK( census_stats::pct_string( 10, 10 ) == "100.0" );
  CHECK( census_stats::pct_string( 55, 1000 ) == "5.5" );
  CHECK( census_stats::pct_string( 554, 10000 ) == "5.5" );  // 5.54 rounds down
  CHECK( census_stats::pct_string( 555, 10000 ) == "5.6" );  // 5.55 rounds up
  CHECK( census_stats::pct_string( 1, 65534 ) == "0.0" );
}

TEST_CASE( "census JSON schema and table rendering" )
{
  census_config config;
  config.num_features = 2;
  config.seed = 42; // carried through to the report even when unused
  const census_stats stats = run_census( config );

  const nlohmann::ordered_json j = census_stats_json( stats );
  const std::vector<std::string> keys = { "m", "functions", "issues", "registry_version", "seed" };
  size_t at = 0;
  for ( const auto& [key, value] : j.items() )
  {
    REQUIRE( at < keys.size() );
    CHECK( key == keys[at++] );
  }
  CHECK( j["m"] == 2 );
  CHECK( j["functions"] == 14 );
  CHECK( j["seed"] == 42 );
  CHECK( j["registry_version"] == "default-v1" );
  CHECK( j["issues"].size() == 7 );
  CHECK( j["issues"]["I1"]["functions"] == 8 );
  CHECK( j["issues"]["I1"]["pct"] == "57.1" );
  CHECK( j["issues"]["I1"]["instances"] == 16 );
  CHECK( j["issues"]["I1"]["class0"] == 8 );
  CHECK( j["issues"]["I1"]["class1"] == 8 );
  CHECK( j.dump().find( "elapsed" ) == std::string::npos ); // timing never in JSON

  const std::string table = render_census_table( stats );
  CHECK( table.find( "census: exhaustive, m = 2" ) != std::string::npos );
  CHECK( table.find( "functions audited: 14 of 14" ) != std::string::npos );
  CHECK( table.find( "I6*" ) != std::string::npos ); // provisional marker
  CHECK( table.find( "exactly equal for every issue" ) != std::string::npos );
}

TEST_CASE( "sampled census runs and reports without exactness claims" )
{
  census_config config;
  config.num_features = 5;
  config.mode = census_mode::sampled;
  config.seed = 7;
  config.sample_count = 64;
  config.workers = 2;
  const census_stats stats = run_census( config );
  CHECK( stats.functions_audited == 64 );
  CHECK( stats.instances_audited == 64 * 32 );
  CHECK( stats.functions_total == 4294967294ull );
  CHECK( stats.implication_violations == 0 );
  CHECK( !parity_report( stats ).exhaustive );

  const std::string table = render_census_table( stats );
  CHECK( table.find( "sampled" ) != std::string::npos );
  CHECK( table.find( "seed = 7" ) != std::string::npos );

  // identical configuration reproduces identical statistics
  const census_stats again = run_census( config );
  CHECK( census_stats_json( again ).dump() == census_stats_json( stats ).dump() );
}

TEST_CASE( "negation bijection forces exact class parity" )
{
  census_config config;
  config.num_features = 3;
  const parity_summary parity = parity_report( run_census( config ) );
  CHECK( parity.exhaustive );
  CHECK( parity.all_equal );
  for ( int64_t d : parity.deviation )
  {
    CHECK( d == 0 );
  }
}

TEST_CASE( "workers must be positive and the registry known" )
{
  census_config config;
  config.num_features = 2;
  config.workers = 0;
  CHECK_THROWS_AS( run_census( config ), std::invalid_argument );
  config.workers = 1;
  config.registry_version = "table3-v1";
  CHECK_THROWS_AS( run_census( config ), std::invalid_argument );
}
