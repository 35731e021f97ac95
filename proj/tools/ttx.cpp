/*!
  \file ttx.cpp
  \brief Command-line front end: explanations, Shapley attributions,
         misleading-attribution audits and the function census.

  Exit codes: 0 success, 1 internal invariant violation (duality or
  efficiency failure — a bug, aborted loudly), 2 usage or parse error,
  3 constant classifier, 4 invalid instance, 5 checkpoint mismatch.
*/

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ttx/audit.hpp"
#include "ttx/census.hpp"
#include "ttx/explain.hpp"
#include "ttx/json_io.hpp"
#include "ttx/model.hpp"
#include "ttx/shapley.hpp"

namespace
{

using namespace ttx;

/*! \brief Bad --instance / --row arguments (exit code 4). */
struct bad_instance_error : std::runtime_error
{
  using std::runtime_error::runtime_error;
};

/*! \brief Usage problems outside CLI11's reach, e.g. unreadable files (exit 2). */
struct usage_error : std::runtime_error
{
  using std::runtime_error::runtime_error;
};

truth_table load_table( const std::string& path )
{
  std::ifstream in( path, std::ios::binary );
  if ( !in )
  {
    throw usage_error( "cannot open input file " + path );
  }
  std::ostringstream text;
  text << in.rdbuf();
  return parse_truth_table( text.str() );
}

/*! \brief Instance bits as "0,0,1,0" or compact "0010". */
point parse_instance_text( const std::string& text, int num_features )
{
  point bits;
  bool expect_bit = true;
  for ( char c : text )
  {
    if ( c == ' ' )
    {
      continue;
    }
    if ( c == ',' )
    {
      if ( expect_bit )
      {
        throw bad_instance_error( "instance: misplaced ',' in \"" + text + "\"" );
      }
      expect_bit = true;
      continue;
    }
    if ( c != '0' && c != '1' )
    {
      throw bad_instance_error( std::string( "instance: invalid character '" ) + c + "', expected 0 or 1" );
    }
    bits.push_back( c - '0' );
    expect_bit = false;
  }
  if ( ( int )bits.size() != num_features )
  {
    throw bad_instance_error( "instance has " + std::to_string( bits.size() ) +
                              " features, classifier expects " + std::to_string( num_features ) );
  }
  return bits;
}

struct instance_options
{
  std::string bits;  //!< --instance
  uint64_t row = 0;  //!< --row (1-based)

  point resolve( const truth_table& table ) const
  {
    if ( !bits.empty() )
    {
      return parse_instance_text( bits, table.num_features() );
    }
    if ( row < 1 || row > table.num_rows() )
    {
      throw bad_instance_error( "row " + std::to_string( row ) + " outside [1, " +
                                std::to_string( table.num_rows() ) + "]" );
    }
    return point_from_row( table.num_features(), row );
  }
};

void add_instance_options( CLI::App* sub, instance_options& opts )
{
  auto* group = sub->add_option_group( "instance", "how to select the instance" );
  group->add_option( "--instance", opts.bits, "instance bits, e.g. \"0,0,0,0\" or \"0000\"" );
  group->add_option( "--row", opts.row, "1-based truth-table row of the instance" );
  group->require_option( 1 );
}

std::string instance_text( const point& p )
{
  std::string out = "(";
  for ( size_t i = 0; i < p.size(); ++i )
  {
    out += i ? "," : "";
    out += char( '0' + p[i] );
  }
  return out + ")";
}

void print_problem_header( std::ostream& out, const explanation_problem& problem )
{
  out << "m = " << problem.num_features() << "  function = " << problem.table().bit_string()
      << "  instance = " << instance_text( problem.instance() ) << "  row = "
      << problem.instance_row() << "  prediction = " << ( int )problem.prediction() << "\n";
}

nlohmann::ordered_json problem_header_json( const explanation_problem& problem )
{
  nlohmann::ordered_json j;
  j["m"] = problem.num_features();
  j["function"] = problem.table().bit_string();
  j["instance_row"] = problem.instance_row();
  j["prediction"] = ( int )problem.prediction();
  return j;
}

std::vector<std::vector<int>> member_lists( const std::vector<feature_set>& sets )
{
  std::vector<std::vector<int>> out;
  out.reserve( sets.size() );
  for ( const feature_set& s : sets )
  {
    out.push_back( s.members() );
  }
  return out;
}

int cmd_explain( const std::string& input, const instance_options& inst, const std::string& format )
{
  const truth_table table = load_table( input );
  const explanation_problem problem( table, inst.resolve( table ) );
  const explanation_sets sets = enumerate_explanations( problem );
  if ( !mhs_duality_holds( sets ) )
  {
    throw std::logic_error( "explain: minimal-hitting-set duality violated" );
  }
  const relevancy_report relevancy = classify_relevancy( problem.num_features(), sets );

  if ( format == "json" )
  {
    nlohmann::ordered_json j = problem_header_json( problem );
    j["axps"] = member_lists( sets.axps );
    j["cxps"] = member_lists( sets.cxps );
    j["relevant"] = relevancy.relevant.members();
    j["irrelevant"] = relevancy.irrelevant.members();
    std::cout << j.dump() << "\n";
    return 0;
  }
  print_problem_header( std::cout, problem );
  for ( const feature_set& axp : sets.axps )
  {
    std::cout << "AXp " << axp.str() << "\n";
  }
  for ( const feature_set& cxp : sets.cxps )
  {
    std::cout << "CXp " << cxp.str() << "\n";
  }
  std::cout << "relevant " << relevancy.relevant.str() << "\n"
            << "irrelevant " << relevancy.irrelevant.str() << "\n";
  return 0;
}

/*! \brief Features with maximal |Sv|; strict iff the argmax is unique. */
std::vector<int> largest_magnitude( const shapley_report& report )
{
  std::vector<int> largest;
  rational best;
  for ( int i = 1; i <= report.num_features; ++i )
  {
    const rational& v = report.value_of( i );
    const rational magnitude = v < rational( 0 ) ? -v : v;
    if ( largest.empty() || best < magnitude )
    {
      best = magnitude;
      largest = { i };
    }
    else if ( magnitude == best )
    {
      largest.push_back( i );
    }
  }
  return largest;
}

void print_shapley_lines( std::ostream& out, const shapley_report& report )
{
  const std::vector<int> largest = largest_magnitude( report );
  for ( int i = 1; i <= report.num_features; ++i )
  {
    const rational& v = report.value_of( i );
    char approx[32];
    std::snprintf( approx, sizeof approx, "%.6f", v.approx() );
    out << "Sv(" << i << ") = " << v.str() << "  (" << approx << ")";
    if ( largest.size() == 1 && largest[0] == i )
    {
      out << "  <- strictly largest |Sv|";
    }
    out << "\n";
  }
  if ( largest.size() > 1 )
  {
    out << "largest |Sv| tied between features";
    for ( int i : largest )
    {
      out << " " << i;
    }
    out << "\n";
  }
  const rational sum_rhs = rational( report.prediction ) - report.mean_empty;
  out << "efficiency: sum Sv = " << sum_rhs.str() << " = prediction - mean(no features fixed) = "
      << ( int )report.prediction << " - " << report.mean_empty.str() << "  [ok]\n";
}

int cmd_shapley( const std::string& input, const instance_options& inst, const std::string& format )
{
  const truth_table table = load_table( input );
  const explanation_problem problem( table, inst.resolve( table ) );
  const shapley_report report = shapley_values( problem );
  const shapley_report cross_check = shapley_values_fixed_den( problem );
  if ( report.values != cross_check.values )
  {
    throw std::logic_error( "shapley: rational and fixed-denominator routes disagree" );
  }

  if ( format == "json" )
  {
    nlohmann::ordered_json j = problem_header_json( problem );
    auto sv = nlohmann::ordered_json::array();
    auto sv_approx = nlohmann::ordered_json::array();
    for ( const rational& v : report.values )
    {
      sv.push_back( v.str() );
      sv_approx.push_back( v.approx() );
    }
    j["sv"] = std::move( sv );
    j["sv_approx"] = std::move( sv_approx );
    j["mean_empty"] = report.mean_empty.str();
    const std::vector<int> largest = largest_magnitude( report );
    j["largest"] = largest;
    j["largest_strict"] = largest.size() == 1;
    std::cout << j.dump() << "\n";
    return 0;
  }
  print_problem_header( std::cout, problem );
  print_shapley_lines( std::cout, report );
  return 0;
}

int cmd_audit( const std::string& input, const instance_options& inst, const std::string& format,
               const std::string& registry_version )
{
  const truth_table table = load_table( input );
  const explanation_problem problem( table, inst.resolve( table ) );
  const issue_registry& registry = issue_registry::get( registry_version );
  const audit_record record = audit_instance( problem, registry );

  if ( format == "json" )
  {
    std::cout << audit_record_json( record ).dump() << "\n";
    return 0;
  }
  print_problem_header( std::cout, problem );
  std::cout << "relevant " << record.relevancy.relevant.str() << "  irrelevant "
            << record.relevancy.irrelevant.str() << "\n";
  print_shapley_lines( std::cout, record.shapley );
  std::cout << "issues [registry " << record.issues.registry_version << "]\n";
  for ( int k = 0; k < num_issues; ++k )
  {
    const issue_definition& def = registry.issues()[k];
    std::cout << "  " << def.name << ( def.provisional ? "*" : " " )
              << ( record.issues.flags[k] ? "  present  witness {" : "  absent " );
    if ( record.issues.flags[k] )
    {
      const std::vector<int>& w = record.issues.witnesses[k];
      for ( size_t i = 0; i < w.size(); ++i )
      {
        std::cout << ( i ? "," : "" ) << w[i];
      }
      std::cout << "}";
    }
    std::cout << "  -- " << def.summary << "\n";
  }
  return 0;
}

int cmd_census( int num_features, const std::string& mode, uint64_t samples, uint64_t seed,
                int workers, const std::string& registry_version, const std::string& checkpoint,
                const std::string& emit_instances, const std::string& format )
{
  census_config config;
  config.num_features = num_features;
  config.mode = mode == "sampled" ? census_mode::sampled : census_mode::exhaustive;
  config.sample_count = samples;
  config.seed = seed;
  config.workers = workers;
  config.registry_version = registry_version;
  config.checkpoint_path = checkpoint;

  std::ofstream instance_stream;
  if ( !emit_instances.empty() )
  {
    instance_stream.open( emit_instances, std::ios::trunc );
    if ( !instance_stream )
    {
      throw usage_error( "cannot open instance output file " + emit_instances );
    }
    config.instance_sink = [&instance_stream]( const audit_record& record ) {
      instance_stream << audit_record_json( record ).dump() << "\n";
    };
  }

  const census_stats stats = run_census( config );
  if ( format == "json" )
  {
    std::cout << census_stats_json( stats ).dump() << "\n";
  }
  else
  {
    std::cout << render_census_table( stats );
    if ( !emit_instances.empty() )
    {
      std::cout << "\ninstance records written to " << emit_instances << "\n";
    }
  }
  return 0;
}

/*! \brief Exhaustive duality/union/efficiency sweep over every non-constant
    function with up to three features, at every instance. */
int cmd_selfcheck()
{
  uint64_t total = 0;
  for ( int m = 1; m <= 3; ++m )
  {
    function_enumerator functions( m, census_mode::exhaustive );
    uint64_t problems = 0;
    while ( auto table = functions.next() )
    {
      for ( uint64_t row = 1; row <= table->num_rows(); ++row )
      {
        const explanation_problem problem( *table, point_from_row( m, row ) );
        const explanation_sets sets = enumerate_explanations( problem );
        if ( !mhs_duality_holds( sets ) )
        {
          std::cerr << "ttx: duality violated for function " << table->bit_string() << " row "
                    << row << "\n";
          return 1;
        }
        classify_relevancy( m, sets ); // throws if the AXp and CXp unions differ
        const shapley_report a = shapley_values( problem );      // both routes verify the
        const shapley_report b = shapley_values_fixed_den( problem ); // efficiency identity
        if ( a.values != b.values )
        {
          std::cerr << "ttx: attribution routes disagree for function " << table->bit_string()
                    << " row " << row << "\n";
          return 1;
        }
        ++problems;
      }
    }
    std::cout << "selfcheck m=" << m << ": " << functions.count() << " functions, " << problems
              << " problems ok\n";
    total += problems;
  }
  std::cout << "selfcheck: " << total
            << " problems — duality, relevancy union, efficiency and route agreement all hold\n";
  return 0;
}

} // namespace

int main( int argc, char** argv )
{
  CLI::App app{ "exact explanations, Shapley attributions and misleading-attribution\n"
                "audits for boolean classifiers given as truth tables" };
  app.require_subcommand( 1 );

  std::string input, format = "table", registry_version = "default-v1";
  std::string mode = "exhaustive", checkpoint, emit_instances;
  instance_options inst;
  int num_features = 4, workers = 1;
  uint64_t seed = 0, samples = 0;
  const auto format_check = CLI::IsMember( { "table", "json" } );

  CLI::App* explain = app.add_subcommand( "explain", "enumerate all AXp's and CXp's" );
  explain->add_option( "--input", input, "truth-table file (.tt)" )->required();
  add_instance_options( explain, inst );
  explain->add_option( "--format", format, "output format" )->check( format_check );

  CLI::App* shapley = app.add_subcommand( "shapley", "exact Shapley values of every feature" );
  shapley->add_option( "--input", input, "truth-table file (.tt)" )->required();
  add_instance_options( shapley, inst );
  shapley->add_option( "--format", format, "output format" )->check( format_check );

  CLI::App* audit = app.add_subcommand( "audit", "flag misleading attributions (I1..I7)" );
  audit->add_option( "--input", input, "truth-table file (.tt)" )->required();
  add_instance_options( audit, inst );
  audit->add_option( "--format", format, "output format" )->check( format_check );
  audit->add_option( "--registry", registry_version, "issue registry version" );

  CLI::App* census = app.add_subcommand( "census", "audit every function of m features" );
  census->add_option( "-m,--features", num_features, "number of features" )
      ->check( CLI::Range( 1, 20 ) );
  census->add_option( "--mode", mode, "exhaustive or sampled" )
      ->check( CLI::IsMember( { "exhaustive", "sampled" } ) );
  census->add_option( "--samples", samples, "functions to draw in sampled mode" );
  census->add_option( "--seed", seed, "PRNG seed for sampled mode" );
  census->add_option( "--workers", workers, "worker threads" )->check( CLI::Range( 1, 4096 ) );
  census->add_option( "--registry", registry_version, "issue registry version" );
  census->add_option( "--checkpoint", checkpoint, "checkpoint file for resumable runs" );
  census->add_option( "--emit-instances", emit_instances,
                      "stream every per-instance record to this file (JSON lines)" );
  census->add_option( "--format", format, "output format" )->check( format_check );

  app.add_subcommand( "selfcheck", "exhaustive correctness sweep over small classifiers" );

  try
  {
    app.parse( argc, argv );
  }
  catch ( const CLI::ParseError& e )
  {
    const int code = app.exit( e );
    return code == 0 ? 0 : 2;
  }

  try
  {
    if ( explain->parsed() )
    {
      return cmd_explain( input, inst, format );
    }
    if ( shapley->parsed() )
    {
      return cmd_shapley( input, inst, format );
    }
    if ( audit->parsed() )
    {
      return cmd_audit( input, inst, format, registry_version );
    }
    if ( census->parsed() )
    {
      return cmd_census( num_features, mode, samples, seed, workers, registry_version, checkpoint,
                         emit_instances, format );
    }
    return cmd_selfcheck();
  }
  catch ( const parse_error& e )
  {
    std::cerr << "ttx: " << e.what() << "\n";
    return 2;
  }
  catch ( const constant_function_error& e )
  {
    std::cerr << "ttx: " << e.what() << "\n";
    return 3;
  }
  catch ( const bad_instance_error& e )
  {
    std::cerr << "ttx: " << e.what() << "\n";
    return 4;
  }
  catch ( const checkpoint_mismatch_error& e )
  {
    std::cerr << "ttx: " << e.what() << "\n";
    return 5;
  }
  catch ( const usage_error& e )
  {
    std::cerr << "ttx: " << e.what() << "\n";
    return 2;
  }
  catch ( const std::invalid_argument& e )
  {
    std::cerr << "ttx: " << e.what() << "\n";
    return 2;
  }
  catch ( const std::out_of_range& e )
  {
    std::cerr << "ttx: " << e.what() << "\n";
    return 2;
  }
  catch ( const std::logic_error& e )
  {
    std::cerr << "ttx: internal invariant violation: " << e.what() << "\n";
    return 1;
  }
  catch ( const std::exception& e )
  {
    std::cerr << "ttx: " << e.what() << "\n";
    return 2;
  }
}
