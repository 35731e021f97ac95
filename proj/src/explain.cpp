#include "ttx/explain.hpp"

#include <algorithm>
#include <utility>

#include "ttx/detail/subcube.hpp"

namespace ttx
{

namespace
{

using detail::for_each_row_fixing;

template<typename Fn>
void for_each_agreeing_row( const explanation_problem& problem, feature_set fixed, Fn&& fn )
{
  for_each_row_fixing( problem.num_features(), problem.instance(), fixed, std::forward<Fn>( fn ) );
}

bool check_universe( const explanation_problem& problem, feature_set s )
{
  return s.subset_of( feature_set::universe( problem.num_features() ) );
}

} // namespace

bool is_weak_axp( const explanation_problem& problem, feature_set fixed )
{
  if ( !check_universe( problem, fixed ) )
  {
    throw std::invalid_argument( "is_weak_axp: set not within {1..m}" );
  }
  bool sufficient = true;
  for_each_agreeing_row( problem, fixed, [&]( uint64_t row ) {
    if ( problem.table().value_at_row( row ) != problem.prediction() )
    {
      sufficient = false;
      return false;
    }
    return true;
  } );
  return sufficient;
}

bool is_axp( const explanation_problem& problem, feature_set fixed )
{
  if ( !is_weak_axp( problem, fixed ) )
  {
    return false;
  }
  // weak-AXp is monotone, so dropping single features decides minimality
  for ( int t : fixed.members() )
  {
    if ( is_weak_axp( problem, fixed.without( t ) ) )
    {
      return false;
    }
  }
  return true;
}

bool is_weak_cxp( const explanation_problem& problem, feature_set freed )
{
  if ( !check_universe( problem, freed ) )
  {
    throw std::invalid_argument( "is_weak_cxp: set not within {1..m}" );
  }
  bool flips = false;
  for_each_agreeing_row( problem, freed.complement_in( problem.num_features() ), [&]( uint64_t row ) {
    if ( problem.table().value_at_row( row ) != problem.prediction() )
    {
      flips = true;
      return false;
    }
    return true;
  } );
  return flips;
}

bool is_cxp( const explanation_problem& problem, feature_set freed )
{
  if ( !is_weak_cxp( problem, freed ) )
  {
    return false;
  }
  for ( int t : freed.members() )
  {
    if ( is_weak_cxp( problem, freed.without( t ) ) )
    {
      return false;
    }
  }
  return true;
}

namespace
{

template<typename WeakPred>
std::vector<feature_set> sweep_minimal( int num_features, WeakPred&& weak )
{
  // all subsets satisfying the monotone predicate whose single-feature
  // reductions all fail it, ascending by mask
  std::vector<feature_set> out;
  const uint32_t end = 1u << num_features;
  for ( uint32_t mask = 0; mask < end; ++mask )
  {
    const feature_set s{ mask };
    if ( !weak( s ) )
    {
      continue;
    }
    bool minimal = true;
    for ( int t : s.members() )
    {
      if ( weak( s.without( t ) ) )
      {
        minimal = false;
        break;
      }
    }
    if ( minimal )
    {
      out.push_back( s );
    }
  }
  return out;
}

} // namespace

std::vector<feature_set> enumerate_axps( const explanation_problem& problem )
{
  auto axps = sweep_minimal( problem.num_features(),
                             [&]( feature_set s ) { return is_weak_axp( problem, s ); } );
  // the empty set sufficient would mean a constant function, which the
  // problem type excludes
  if ( !axps.empty() && axps.front().empty() )
  {
    throw std::logic_error( "enumerate_axps: empty AXp on a non-constant classifier" );
  }
  if ( axps.empty() )
  {
    throw std::logic_error( "enumerate_axps: no AXp found (the full set is always sufficient)" );
  }
  return axps;
}

std::vector<feature_set> enumerate_cxps( const explanation_problem& problem )
{
  auto cxps = sweep_minimal( problem.num_features(),
                             [&]( feature_set s ) { return is_weak_cxp( problem, s ); } );
  if ( cxps.empty() )
  {
    throw std::logic_error( "enumerate_cxps: no CXp found for a non-constant classifier" );
  }
  return cxps;
}

std::vector<feature_set> minimal_hitting_sets( const std::vector<feature_set>& sets,
                                               feature_set universe )
{
  for ( const feature_set& s : sets )
  {
    if ( s.empty() )
    {
      throw std::invalid_argument( "minimal_hitting_sets: an input set is empty" );
    }
    if ( !s.subset_of( universe ) )
    {
      throw std::invalid_argument( "minimal_hitting_sets: input set not within the universe" );
    }
  }
  const auto hits_all = [&]( feature_set h ) {
    return std::all_of( sets.begin(), sets.end(),
                        [&]( feature_set s ) { return h.intersects( s ); } );
  };
  std::vector<feature_set> out;
  const uint32_t end = universe.bits;
  // sweep subsets of the universe only
  for ( uint32_t mask = 0;; mask = ( mask - end ) & end )
  {
    const feature_set h{ mask };
    if ( hits_all( h ) )
    {
      bool minimal = true;
      for ( int t : h.members() )
      {
        if ( hits_all( h.without( t ) ) )
        {
          minimal = false;
          break;
        }
      }
      if ( minimal )
      {
        out.push_back( h );
      }
    }
    if ( mask == end )
    {
      break;
    }
  }
  std::sort( out.begin(), out.end() );
  return out;
}

explanation_sets enumerate_explanations( const explanation_problem& problem )
{
  return explanation_sets{ enumerate_axps( problem ), enumerate_cxps( problem ) };
}

bool mhs_duality_holds( const explanation_sets& sets )
{
  // minimal hitting sets only ever draw from the union of the input sets
  feature_set universe;
  for ( const feature_set& s : sets.axps )
  {
    universe = universe.unite( s );
  }
  for ( const feature_set& s : sets.cxps )
  {
    universe = universe.unite( s );
  }
  if ( sets.axps.empty() || sets.cxps.empty() )
  {
    return false;
  }
  for ( const auto& family : { sets.axps, sets.cxps } )
  {
    for ( const feature_set& s : family )
    {
      if ( s.empty() )
      {
        return false;
      }
    }
  }
  return minimal_hitting_sets( sets.cxps, universe ) == sets.axps &&
         minimal_hitting_sets( sets.axps, universe ) == sets.cxps;
}

relevancy_report classify_relevancy( int num_features, const explanation_sets& sets )
{
  feature_set from_axps;
  for ( const feature_set& s : sets.axps )
  {
    from_axps = from_axps.unite( s );
  }
  feature_set from_cxps;
  for ( const feature_set& s : sets.cxps )
  {
    from_cxps = from_cxps.unite( s );
  }
  if ( from_axps != from_cxps )
  {
    throw std::logic_error( "classify_relevancy: AXp and CXp feature unions disagree" );
  }
  relevancy_report report;
  report.num_features = num_features;
  report.relevant = from_axps;
  report.irrelevant = from_axps.complement_in( num_features );
  return report;
}

relevancy_report classify_relevancy( const explanation_problem& problem )
{
  return classify_relevancy( problem.num_features(), enumerate_explanations( problem ) );
}

bool irrelevance_formula_holds( const explanation_problem& problem, int feature )
{
  const int m = problem.num_features();
  if ( feature < 1 || feature > m )
  {
    throw std::invalid_argument( "irrelevance_formula_holds: feature out of range" );
  }
  // For every AXp, overriding the chosen feature with either value while the
  // remaining AXp features stay fixed must keep the prediction.
  for ( const feature_set& axp : enumerate_axps( problem ) )
  {
    for ( uint8_t value : { uint8_t( 0 ), uint8_t( 1 ) } )
    {
      point center = problem.instance();
      center[feature - 1] = value;
      bool ok = true;
      for_each_row_fixing( m, center, axp.with( feature ), [&]( uint64_t row ) {
        if ( problem.table().value_at_row( row ) != problem.prediction() )
        {
          ok = false;
          return false;
        }
        return true;
      } );
      if ( !ok )
      {
        return false;
      }
    }
  }
  return true;
}

} // namespace ttx
