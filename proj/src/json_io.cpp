#include "ttx/json_io.hpp"

#include <iomanip>
#include <sstream>

namespace ttx
{

nlohmann::ordered_json audit_record_json( const audit_record& record )
{
  const issue_registry& registry = issue_registry::get( record.issues.registry_version );
  nlohmann::ordered_json j;
  j["m"] = record.num_features;
  j["function"] = record.function_bits;
  j["instance_row"] = record.instance_row;
  j["prediction"] = ( int )record.prediction;
  j["relevant"] = record.relevancy.relevant.members();
  j["irrelevant"] = record.relevancy.irrelevant.members();
  auto sv = nlohmann::ordered_json::array();
  for ( const rational& value : record.shapley.values )
  {
    sv.push_back( value.str() );
  }
  j["sv"] = std::move( sv );
  auto issues = nlohmann::ordered_json::object();
  auto witnesses = nlohmann::ordered_json::object();
  for ( int k = 0; k < num_issues; ++k )
  {
    const std::string& name = registry.issues()[k].name;
    issues[name] = record.issues.flags[k];
    if ( record.issues.flags[k] )
    {
      witnesses[name] = record.issues.witnesses[k];
    }
  }
  j["issues"] = std::move( issues );
  j["witnesses"] = std::move( witnesses );
  j["registry_version"] = record.issues.registry_version;
  return j;
}

nlohmann::ordered_json census_stats_json( const census_stats& stats )
{
  const issue_registry& registry = issue_registry::get( stats.registry_version );
  nlohmann::ordered_json j;
  j["m"] = stats.num_features;
  j["functions"] = stats.functions_audited;
  auto issues = nlohmann::ordered_json::object();
  for ( int k = 0; k < num_issues; ++k )
  {
    auto entry = nlohmann::ordered_json::object();
    entry["functions"] = stats.issues[k].functions;
    entry["pct"] = census_stats::pct_string( stats.issues[k].functions, stats.functions_audited );
    entry["instances"] = stats.issues[k].instances;
    entry["class0"] = stats.issues[k].class0;
    entry["class1"] = stats.issues[k].class1;
    issues[registry.issues()[k].name] = std::move( entry );
  }
  j["issues"] = std::move( issues );
  j["registry_version"] = stats.registry_version;
  j["seed"] = stats.seed;
  return j;
}

std::string render_census_table( const census_stats& stats )
{
  const issue_registry& registry = issue_registry::get( stats.registry_version );
  const bool exhaustive = stats.mode == census_mode::exhaustive;
  std::ostringstream out;

  out << "census: " << ( exhaustive ? "exhaustive" : "sampled" )
      << ", m = " << stats.num_features;
  if ( !exhaustive )
  {
    out << ", seed = " << stats.seed;
  }
  out << "\nfunctions audited: " << stats.functions_audited << " of " << stats.functions_total
      << "; instances audited: " << stats.instances_audited << "\nissue registry: "
      << stats.registry_version;
  bool any_provisional = false;
  for ( int k = 0; k < num_issues; ++k )
  {
    if ( registry.issues()[k].provisional )
    {
      out << ( any_provisional ? ", " : " (provisional: " ) << registry.issues()[k].name;
      any_provisional = true;
    }
  }
  if ( any_provisional )
  {
    out << ")";
  }
  out << "\nelapsed: " << std::fixed << std::setprecision( 2 ) << stats.elapsed_seconds
      << " s\n\n";

  out << std::left << std::setw( 7 ) << "issue" << std::right << std::setw( 10 ) << "functions"
      << std::setw( 9 ) << "pct(fn)" << std::setw( 11 ) << "instances" << std::setw( 11 )
      << "pct(inst)" << std::setw( 10 ) << "class 0" << std::setw( 10 ) << "class 1" << "\n";
  for ( int k = 0; k < num_issues; ++k )
  {
    const issue_tally& t = stats.issues[k];
    std::string name = registry.issues()[k].name;
    if ( registry.issues()[k].provisional )
    {
      name += "*";
    }
    out << std::left << std::setw( 7 ) << name << std::right << std::setw( 10 ) << t.functions
        << std::setw( 9 ) << census_stats::pct_string( t.functions, stats.functions_audited )
        << std::setw( 11 ) << t.instances << std::setw( 11 )
        << census_stats::pct_string( t.instances, stats.instances_audited ) << std::setw( 10 )
        << t.class0 << std::setw( 10 ) << t.class1 << "\n";
  }
  out << "(a function is counted for an issue if any of its instances exhibits it)\n";
  if ( any_provisional )
  {
    out << "(* provisional predicate; see the issue registry notes in the README)\n";
  }

  const parity_summary parity = parity_report( stats );
  out << "\nclass split of flagged instances (prediction 0 vs 1): ";
  if ( parity.all_equal )
  {
    out << ( parity.exhaustive ? "exactly equal for every issue\n"
                               : "equal for every issue (sampled run; no exactness claim)\n" );
  }
  else
  {
    // parity is only guaranteed for exhaustive runs; a sampled split is expected noise
    out << ( parity.exhaustive ? "UNEQUAL —" : "uneven (expected for a sample) —" );
    for ( int k = 0; k < num_issues; ++k )
    {
      if ( parity.deviation[k] != 0 )
      {
        out << " " << registry.issues()[k].name << ": " << std::showpos << parity.deviation[k]
            << std::noshowpos;
      }
    }
    out << "\n";
  }
  return out.str();
}

} // namespace ttx
