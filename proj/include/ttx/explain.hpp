/*!
  \file explain.hpp
  \brief Abductive and contrastive explanations, relevancy, hitting-set duality.

  An AXp is a subset-minimal set of features whose fixing to the instance's
  values forces the prediction; a CXp is a subset-minimal set whose freeing
  permits changing it.  Decision procedures sweep the subset lattice directly,
  which is polynomial in the table size and adequate up to a handful of
  features; cost is exponential in m beyond that.
*/

#pragma once

#include <vector>

#include "ttx/model.hpp"

namespace ttx
{

/*! \brief Sufficiency for the prediction: every point agreeing with the
    instance on \p fixed keeps the predicted class. */
bool is_weak_axp( const explanation_problem& problem, feature_set fixed );

/*! \brief Weak AXp that loses sufficiency when any single feature is dropped. */
bool is_axp( const explanation_problem& problem, feature_set fixed );

/*! \brief Sufficiency for changing the prediction: some point agreeing with
    the instance outside \p freed flips the predicted class. */
bool is_weak_cxp( const explanation_problem& problem, feature_set freed );

/*! \brief Weak CXp that loses sufficiency when any single feature is dropped. */
bool is_cxp( const explanation_problem& problem, feature_set freed );

/*! \brief All AXp's, ascending by bitmask. */
std::vector<feature_set> enumerate_axps( const explanation_problem& problem );

/*! \brief All CXp's, ascending by bitmask. */
std::vector<feature_set> enumerate_cxps( const explanation_problem& problem );

/*! \brief All subset-minimal subsets of \p universe intersecting every set in
    \p sets, ascending by bitmask.  Throws std::invalid_argument if some input
    set is empty (nothing can hit it).  An empty collection is hit by the
    empty set alone. */
std::vector<feature_set> minimal_hitting_sets( const std::vector<feature_set>& sets,
                                               feature_set universe );

/*! \brief The two explanation families of one problem. */
struct explanation_sets
{
  std::vector<feature_set> axps;
  std::vector<feature_set> cxps;
};

explanation_sets enumerate_explanations( const explanation_problem& problem );

/*! \brief Each family is exactly the minimal hitting sets of the other. */
bool mhs_duality_holds( const explanation_sets& sets );

/*! \brief Features split into those occurring in some AXp and the rest. */
struct relevancy_report
{
  int num_features = 0;
  feature_set relevant;
  feature_set irrelevant;
};

/*! \brief Relevant = union of all AXp's.  Also checks that the union of all
    CXp's agrees (a duality consequence) and throws std::logic_error if not. */
relevancy_report classify_relevancy( const explanation_problem& problem );

/*! \brief Same split computed from already-enumerated explanation sets. */
relevancy_report classify_relevancy( int num_features, const explanation_sets& sets );

/*! \brief Overriding \p feature with either value on top of any AXp keeps the
    prediction.  Holds exactly for irrelevant features; serves as a cross-check
    of classify_relevancy, not as the primary decision. */
bool irrelevance_formula_holds( const explanation_problem& problem, int feature );

} // namespace ttx
