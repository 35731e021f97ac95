/*!
  \file audit.hpp
  \brief Per-instance issue classification over relevancy and Shapley values.

  Issues mark ways the Shapley attribution misleads relative feature
  importance.  With R the relevant and I the irrelevant features:

    I1: some i in I has Sv(i) != 0
    I2: some i in I outranks some j in R (|Sv(i)| > |Sv(j)|)
    I3: some j in R has Sv(j) = 0
    I4: I3 and I1 jointly (a zero relevant next to a non-zero irrelevant)
    I5: some i in I outranks every relevant feature
    I6: some i in I ranks at least as high as some j in R (non-strict I2)
    I7: I5 with matching Shapley-value signs on every comparison

  The registry is data-driven so alternative issue definitions can be swapped
  in under a new version string.  I6 and I7 of "default-v1" are provisional
  definitions and marked as such in every report.
*/

#pragma once

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include "ttx/explain.hpp"
#include "ttx/model.hpp"
#include "ttx/shapley.hpp"

namespace ttx
{

inline constexpr int num_issues = 7;

/*! \brief One issue predicate.  detect() returns the witnessing features
    (empty means the issue is absent): the lexicographically smallest
    witnesses, irrelevant-side first for pair predicates. */
struct issue_definition
{
  std::string name;
  std::string summary;
  bool provisional = false;
  std::vector<int> ( *detect )( const relevancy_report&, const shapley_report& ) = nullptr;
};

class issue_registry
{
public:
  const std::string& version() const { return version_; }
  const std::array<issue_definition, num_issues>& issues() const { return issues_; }

  /*! \brief The built-in registry. */
  static const issue_registry& default_v1();

  /*! \brief Lookup by version string; throws std::invalid_argument for
      unknown versions (including "table3-v1", which this build cannot
      provide — see the README). */
  static const issue_registry& get( std::string_view version );

private:
  std::string version_;
  std::array<issue_definition, num_issues> issues_;
};

/*! \brief Flags and witnesses for the seven issues of one instance. */
struct issue_vector
{
  std::array<bool, num_issues> flags{};
  std::array<std::vector<int>, num_issues> witnesses;
  std::string registry_version;

  bool flag( int issue ) const { return flags[issue - 1]; }

  friend bool operator==( const issue_vector& a, const issue_vector& b )
  {
    return a.flags == b.flags && a.witnesses == b.witnesses &&
           a.registry_version == b.registry_version;
  }
};

/*! \brief Evaluates the registry on one instance's relevancy and Shapley
    values.  Throws std::invalid_argument if the relevant set is empty (that
    signals a constant classifier or an upstream bug). */
issue_vector classify_issues( const relevancy_report& relevancy, const shapley_report& shapley,
                              const issue_registry& registry = issue_registry::default_v1() );

/*! \brief Everything the audit knows about one instance. */
struct audit_record
{
  int num_features = 0;
  std::string function_bits; //!< row values of the classifier, row 1 first
  uint64_t instance_row = 0;
  uint8_t prediction = 0;
  relevancy_report relevancy;
  shapley_report shapley;
  issue_vector issues;
};

/*! \brief Full audit of one instance: explanations, duality check, relevancy,
    exact Shapley values, issue flags.  A duality or efficiency violation
    throws std::logic_error — those are internal invariants, never data
    errors. */
audit_record audit_instance( const explanation_problem& problem,
                             const issue_registry& registry = issue_registry::default_v1() );

} // namespace ttx
