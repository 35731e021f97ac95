/*!
  \file shapley.hpp
  \brief Exact Shapley values of an explanation problem, in rational arithmetic.

  The game value of a coalition S is the classifier's mean prediction over all
  points that agree with the instance on S, under the uniform distribution.
  Two independent routes compute the per-feature values:

    - shapley_values: the reference route, summing coalition_weight * marginal
      over all subsets with rational arithmetic;
    - shapley_values_fixed_den: an integer route accumulating multiples of
      1/(m! * 2^m), used where throughput matters (the census).

  Both routes verify the efficiency identity
      sum_i Sv(i) == prediction - mean_value(empty)
  on every call and throw std::logic_error if it fails.
*/

#pragma once

#include <cstdint>
#include <vector>

#include "ttx/model.hpp"
#include "ttx/rational.hpp"

namespace ttx
{

/*! \brief All points agreeing with the instance on \p fixed, in row order. */
std::vector<point> agreeing_points( const explanation_problem& problem, feature_set fixed );

/*! \brief Mean prediction over agreeing_points(problem, fixed); exact, with a
    denominator dividing 2^(m - |fixed|). */
rational mean_value( const explanation_problem& problem, feature_set fixed );

/*! \brief Change in mean_value when \p feature joins \p fixed.
    Throws std::invalid_argument if the feature is already a member. */
rational marginal_value( const explanation_problem& problem, int feature, feature_set fixed );

/*! \brief The Shapley coalition weight |S|! (m - |S| - 1)! / m! — a function
    of the coalition size and the feature count alone. */
rational coalition_weight( int coalition_size, int num_features );

/*! \brief Per-feature Shapley values of one explanation problem. */
struct shapley_report
{
  int num_features = 0;
  std::vector<rational> values;  //!< values[i - 1] is feature i's Shapley value
  rational mean_empty;           //!< mean prediction with nothing fixed
  uint8_t prediction = 0;

  const rational& value_of( int feature ) const { return values[feature - 1]; }
};

/*! \brief Reference rational-arithmetic route. */
shapley_report shapley_values( const explanation_problem& problem );

/*! \brief Fixed-denominator integer route; exact and equal to the reference. */
shapley_report shapley_values_fixed_den( const explanation_problem& problem );

/*! \brief Per-problem cache of subcube one-counts, one entry per subset.

  Built eagerly in O(m 2^m); afterwards read-only, so shared concurrent use is
  safe.  ones(S) is the number of points classified 1 among those agreeing
  with the instance on S.
*/
class subcube_counter
{
public:
  explicit subcube_counter( const explanation_problem& problem );

  int64_t ones( feature_set fixed ) const { return counts_[full_.bits & ~fixed.bits]; }
  rational mean( feature_set fixed ) const;
  int num_features() const { return num_features_; }

private:
  int num_features_;
  feature_set full_;
  std::vector<int64_t> counts_; // indexed by the mask of *freed* features
};

/*! \brief Reference route on a prebuilt counter (same result, no rebuild). */
shapley_report shapley_values( const explanation_problem& problem, const subcube_counter& counter );

/*! \brief Integer route on a prebuilt counter. */
shapley_report shapley_values_fixed_den( const explanation_problem& problem,
                                         const subcube_counter& counter );

} // namespace ttx
