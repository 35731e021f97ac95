#include "ttx/shapley.hpp"

#include <array>

#include "ttx/detail/subcube.hpp"

namespace ttx
{

namespace
{

int64_t factorial( int n )
{
  int64_t f = 1;
  for ( int k = 2; k <= n; ++k )
  {
    f *= k;
  }
  return f;
}

void require_member_range( const explanation_problem& problem, feature_set s, const char* who )
{
  if ( !s.subset_of( feature_set::universe( problem.num_features() ) ) )
  {
    throw std::invalid_argument( std::string( who ) + ": set not within {1..m}" );
  }
}

} // namespace

std::vector<point> agreeing_points( const explanation_problem& problem, feature_set fixed )
{
  require_member_range( problem, fixed, "agreeing_points" );
  std::vector<point> out;
  out.reserve( uint64_t( 1 ) << ( problem.num_features() - fixed.size() ) );
  detail::for_each_row_fixing( problem.num_features(), problem.instance(), fixed, [&]( uint64_t row ) {
    out.push_back( point_from_row( problem.num_features(), row ) );
    return true;
  } );
  return out;
}

rational mean_value( const explanation_problem& problem, feature_set fixed )
{
  require_member_range( problem, fixed, "mean_value" );
  int64_t ones = 0;
  detail::for_each_row_fixing( problem.num_features(), problem.instance(), fixed, [&]( uint64_t row ) {
    ones += problem.table().value_at_row( row );
    return true;
  } );
  return rational( ones, int64_t( 1 ) << ( problem.num_features() - fixed.size() ) );
}

rational marginal_value( const explanation_problem& problem, int feature, feature_set fixed )
{
  if ( feature < 1 || feature > problem.num_features() )
  {
    throw std::invalid_argument( "marginal_value: feature out of range" );
  }
  if ( fixed.contains( feature ) )
  {
    throw std::invalid_argument( "marginal_value: feature already fixed" );
  }
  return mean_value( problem, fixed.with( feature ) ) - mean_value( problem, fixed );
}

rational coalition_weight( int coalition_size, int num_features )
{
  if ( num_features < 1 || num_features > max_features )
  {
    throw std::invalid_argument( "coalition_weight: feature count out of range" );
  }
  if ( coalition_size < 0 || coalition_size > num_features - 1 )
  {
    throw std::invalid_argument( "coalition_weight: coalition size out of [0, m-1]" );
  }
  return rational( factorial( coalition_size ) * factorial( num_features - coalition_size - 1 ),
                   factorial( num_features ) );
}

subcube_counter::subcube_counter( const explanation_problem& problem )
    : num_features_( problem.num_features() ), full_( feature_set::universe( num_features_ ) )
{
  const int m = num_features_;
  const uint32_t size = 1u << m;
  counts_.assign( size, 0 );

  // feature i occupies bit (m - i) of a row index
  const uint64_t center_idx = problem.instance_row() - 1;
  std::array<uint64_t, max_features> flip_bit{};
  for ( int i = 1; i <= m; ++i )
  {
    flip_bit[i - 1] = uint64_t( 1 ) << ( m - i );
  }

  // counts_[w] starts as the value at the center with the features in w flipped
  const auto& values = problem.table().values();
  for ( uint32_t w = 0; w < size; ++w )
  {
    uint64_t idx = center_idx;
    for ( uint32_t b = w; b; b &= b - 1 )
    {
      idx ^= flip_bit[__builtin_ctz( b )];
    }
    counts_[w] = values[idx];
  }

  // subset-sum transform: counts_[u] becomes the sum over all w subset of u
  for ( int f = 0; f < m; ++f )
  {
    const uint32_t bit = 1u << f;
    for ( uint32_t u = 0; u < size; ++u )
    {
      if ( u & bit )
      {
        counts_[u] += counts_[u ^ bit];
      }
    }
  }
}

rational subcube_counter::mean( feature_set fixed ) const
{
  return rational( ones( fixed ), int64_t( 1 ) << ( num_features_ - fixed.size() ) );
}

namespace
{

void check_efficiency( const shapley_report& report )
{
  rational sum;
  for ( const rational& v : report.values )
  {
    sum += v;
  }
  if ( sum != rational( report.prediction ) - report.mean_empty )
  {
    throw std::logic_error( "shapley_values: efficiency identity violated" );
  }
}

} // namespace

shapley_report shapley_values( const explanation_problem& problem, const subcube_counter& counter )
{
  const int m = problem.num_features();
  const feature_set full = feature_set::universe( m );

  std::vector<rational> weight_by_size( m );
  for ( int k = 0; k < m; ++k )
  {
    weight_by_size[k] = coalition_weight( k, m );
  }

  shapley_report report;
  report.num_features = m;
  report.prediction = problem.prediction();
  report.mean_empty = counter.mean( feature_set{} );
  report.values.resize( m );

  for ( int i = 1; i <= m; ++i )
  {
    const uint32_t others = full.without( i ).bits;
    rational sum;
    uint32_t mask = 0;
    while ( true )
    {
      const feature_set s{ mask };
      sum += weight_by_size[s.size()] * ( counter.mean( s.with( i ) ) - counter.mean( s ) );
      if ( mask == others )
      {
        break;
      }
      mask = ( mask - others ) & others;
    }
    report.values[i - 1] = sum;
  }

  check_efficiency( report );
  return report;
}

shapley_report shapley_values_fixed_den( const explanation_problem& problem,
                                         const subcube_counter& counter )
{
  const int m = problem.num_features();
  const feature_set full = feature_set::universe( m );

  std::array<int64_t, max_features> size_weight{}; // |S|! (m-|S|-1)!
  for ( int k = 0; k < m; ++k )
  {
    size_weight[k] = factorial( k ) * factorial( m - k - 1 );
  }

  // accumulate Sv(i) * m! * 2^m; each term is
  //   |S|!(m-|S|-1)! * (2^(|S|+1) ones(S+i) - 2^|S| ones(S))
  std::vector<__int128> acc( m, 0 );
  for ( int i = 1; i <= m; ++i )
  {
    const uint32_t others = full.without( i ).bits;
    __int128 sum = 0;
    uint32_t mask = 0;
    while ( true )
    {
      const feature_set s{ mask };
      const int k = s.size();
      const int64_t bracket = ( counter.ones( s.with( i ) ) << ( k + 1 ) ) - ( counter.ones( s ) << k );
      sum += ( __int128 )size_weight[k] * bracket;
      if ( mask == others )
      {
        break;
      }
      mask = ( mask - others ) & others;
    }
    acc[i - 1] = sum;
  }

  const __int128 denom = ( __int128 )factorial( m ) << m;

  // efficiency, checked before any reduction
  __int128 total = 0;
  for ( const __int128& a : acc )
  {
    total += a;
  }
  const __int128 expected =
      problem.prediction() ? denom - ( __int128 )factorial( m ) * counter.ones( feature_set{} )
                           : -( __int128 )factorial( m ) * counter.ones( feature_set{} );
  if ( total != expected )
  {
    throw std::logic_error( "shapley_values_fixed_den: efficiency identity violated" );
  }

  shapley_report report;
  report.num_features = m;
  report.prediction = problem.prediction();
  report.mean_empty = counter.mean( feature_set{} );
  report.values.resize( m );
  for ( int i = 0; i < m; ++i )
  {
    report.values[i] = rational::from_int128( acc[i], denom );
  }
  return report;
}

shapley_report shapley_values( const explanation_problem& problem )
{
  return shapley_values( problem, subcube_counter( problem ) );
}

shapley_report shapley_values_fixed_den( const explanation_problem& problem )
{
  return shapley_values_fixed_den( problem, subcube_counter( problem ) );
}

} // namespace ttx
