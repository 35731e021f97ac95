/*!
  \file subcube.hpp
  \brief Row-order walk over the points agreeing with a center point on a set.
*/

#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "ttx/model.hpp"

namespace ttx::detail
{

/*! \brief Visits the 1-based rows of the subcube fixing \p fixed to \p center,
    ascending; \p fn returns false to stop early. */
template<typename Fn>
void for_each_row_fixing( int m, const point& center, feature_set fixed, Fn&& fn )
{
  uint64_t base = 0;
  std::vector<int> free_features; // ascending feature number = descending significance
  for ( int i = 1; i <= m; ++i )
  {
    if ( fixed.contains( i ) )
    {
      base |= uint64_t( center[i - 1] ) << ( m - i );
    }
    else
    {
      free_features.push_back( i );
    }
  }

  const int k = ( int )free_features.size();
  const uint64_t combos = uint64_t( 1 ) << k;
  for ( uint64_t t = 0; t < combos; ++t )
  {
    uint64_t idx = base;
    for ( int j = 0; j < k; ++j )
    {
      const uint64_t bit = ( t >> ( k - 1 - j ) ) & 1u;
      idx |= bit << ( m - free_features[j] );
    }
    if ( !fn( idx + 1 ) )
    {
      return;
    }
  }
}

} // namespace ttx::detail
