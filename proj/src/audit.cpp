#include "ttx/audit.hpp"

#include <algorithm>

namespace ttx
{

namespace
{

std::vector<int> detect_nonzero_irrelevant( const relevancy_report& rel, const shapley_report& sv )
{
  for ( int i : rel.irrelevant.members() )
  {
    if ( !sv.value_of( i ).is_zero() )
    {
      return { i };
    }
  }
  return {};
}

std::vector<int> detect_irrelevant_outranks_some( const relevancy_report& rel,
                                                  const shapley_report& sv )
{
  for ( int i : rel.irrelevant.members() )
  {
    const rational mag = sv.value_of( i ).abs();
    for ( int j : rel.relevant.members() )
    {
      if ( mag > sv.value_of( j ).abs() )
      {
        return { i, j };
      }
    }
  }
  return {};
}

std::vector<int> detect_zero_relevant( const relevancy_report& rel, const shapley_report& sv )
{
  for ( int j : rel.relevant.members() )
  {
    if ( sv.value_of( j ).is_zero() )
    {
      return { j };
    }
  }
  return {};
}

std::vector<int> detect_zero_relevant_nonzero_irrelevant( const relevancy_report& rel,
                                                          const shapley_report& sv )
{
  const auto irr = detect_nonzero_irrelevant( rel, sv );
  const auto zero = detect_zero_relevant( rel, sv );
  if ( irr.empty() || zero.empty() )
  {
    return {};
  }
  return { irr[0], zero[0] };
}

std::vector<int> detect_irrelevant_outranks_all( const relevancy_report& rel,
                                                 const shapley_report& sv )
{
  for ( int i : rel.irrelevant.members() )
  {
    const rational mag = sv.value_of( i ).abs();
    const auto dominated = [&]( int j ) { return mag > sv.value_of( j ).abs(); };
    const auto relevant = rel.relevant.members();
    if ( std::all_of( relevant.begin(), relevant.end(), dominated ) )
    {
      return { i };
    }
  }
  return {};
}

std::vector<int> detect_irrelevant_ties_or_outranks( const relevancy_report& rel,
                                                     const shapley_report& sv )
{
  for ( int i : rel.irrelevant.members() )
  {
    const rational mag = sv.value_of( i ).abs();
    for ( int j : rel.relevant.members() )
    {
      if ( mag >= sv.value_of( j ).abs() )
      {
        return { i, j };
      }
    }
  }
  return {};
}

std::vector<int> detect_outranks_all_same_sign( const relevancy_report& rel,
                                                const shapley_report& sv )
{
  for ( int i : rel.irrelevant.members() )
  {
    const rational& value = sv.value_of( i );
    const rational mag = value.abs();
    const auto dominated_same_sign = [&]( int j ) {
      return mag > sv.value_of( j ).abs() && value.sign() == sv.value_of( j ).sign();
    };
    const auto relevant = rel.relevant.members();
    if ( std::all_of( relevant.begin(), relevant.end(), dominated_same_sign ) )
    {
      return { i };
    }
  }
  return {};
}

} // namespace

const issue_registry& issue_registry::default_v1()
{
  static const issue_registry registry = [] {
    issue_registry r;
    r.version_ = "default-v1";
    r.issues_ = {
        issue_definition{ "I1", "irrelevant feature with non-zero Shapley value", false,
                          detect_nonzero_irrelevant },
        issue_definition{ "I2", "irrelevant feature with larger |Sv| than a relevant feature", false,
                          detect_irrelevant_outranks_some },
        issue_definition{ "I3", "relevant feature with Shapley value 0", false,
                          detect_zero_relevant },
        issue_definition{ "I4", "relevant feature at 0 alongside a non-zero irrelevant feature",
                          false, detect_zero_relevant_nonzero_irrelevant },
        issue_definition{ "I5", "irrelevant feature with larger |Sv| than every relevant feature",
                          false, detect_irrelevant_outranks_all },
        issue_definition{ "I6", "irrelevant feature with |Sv| at least that of a relevant feature",
                          true, detect_irrelevant_ties_or_outranks },
        issue_definition{ "I7", "irrelevant feature outranking every relevant feature with equal sign",
                          true, detect_outranks_all_same_sign },
    };
    return r;
  }();
  return registry;
}

const issue_registry& issue_registry::get( std::string_view version )
{
  if ( version == "default-v1" )
  {
    return default_v1();
  }
  if ( version == "table3-v1" )
  {
    throw std::invalid_argument(
        "issue_registry: 'table3-v1' is not available in this build; the published issue-table "
        "wording was not available for transcription, so 'default-v1' (I6/I7 provisional) is the "
        "operative registry" );
  }
  throw std::invalid_argument( "issue_registry: unknown version '" + std::string( version ) + "'" );
}

issue_vector classify_issues( const relevancy_report& relevancy, const shapley_report& shapley,
                              const issue_registry& registry )
{
  if ( relevancy.num_features != shapley.num_features )
  {
    throw std::invalid_argument( "classify_issues: reports disagree on the feature count" );
  }
  if ( relevancy.relevant.empty() )
  {
    throw std::invalid_argument( "classify_issues: empty relevant set" );
  }

  issue_vector out;
  out.registry_version = registry.version();
  for ( int k = 0; k < num_issues; ++k )
  {
    out.witnesses[k] = registry.issues()[k].detect( relevancy, shapley );
    out.flags[k] = !out.witnesses[k].empty();
  }

  // implication structure of the default registry
  if ( ( out.flag( 4 ) && !out.flag( 3 ) ) || ( out.flag( 5 ) && !out.flag( 2 ) ) )
  {
    throw std::logic_error( "classify_issues: issue implication violated" );
  }
  return out;
}

audit_record audit_instance( const explanation_problem& problem, const issue_registry& registry )
{
  const explanation_sets sets = enumerate_explanations( problem );
  if ( !mhs_duality_holds( sets ) )
  {
    throw std::logic_error( "audit_instance: hitting-set duality violated" );
  }

  audit_record record;
  record.num_features = problem.num_features();
  record.function_bits = problem.table().bit_string();
  record.instance_row = problem.instance_row();
  record.prediction = problem.prediction();
  record.relevancy = classify_relevancy( problem.num_features(), sets );
  record.shapley = shapley_values_fixed_den( problem );
  record.issues = classify_issues( record.relevancy, record.shapley, registry );
  return record;
}

} // namespace ttx
