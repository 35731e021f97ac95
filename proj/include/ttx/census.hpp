/*!
  \file census.hpp
  \brief Exhaustive (or seeded-sample) audit of all non-constant functions.

  Functions on m features are indexed 1 .. 2^(2^m)-2 by their row-value
  bitstring read as a binary number (row 1 is the most significant bit); the
  two constant functions are the excluded endpoints 0 and 2^(2^m)-1.

  Exhaustive mode requires m <= 4 (65,534 functions); m = 5 runs in sampled
  mode only.  Workers split each checkpoint block into contiguous index
  ranges; the per-issue tallies reduce by integer addition, so results do not
  depend on the worker count.
*/

#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ttx/audit.hpp"
#include "ttx/model.hpp"

namespace ttx
{

enum class census_mode
{
  exhaustive,
  sampled
};

/*! \brief Raised when resuming from a checkpoint whose parameters differ. */
class checkpoint_mismatch_error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

struct census_config
{
  int num_features = 4;
  census_mode mode = census_mode::exhaustive;
  uint64_t seed = 0;          //!< sampled mode only
  uint64_t sample_count = 0;  //!< sampled mode only
  int workers = 1;
  std::string registry_version = "default-v1";
  std::string checkpoint_path;      //!< empty: no checkpointing
  uint64_t checkpoint_interval = 4096; //!< functions per checkpoint block
  //! called per audited instance, in function/row order (streaming export)
  std::function<void( const audit_record& )> instance_sink;
};

struct issue_tally
{
  uint64_t functions = 0; //!< functions with at least one flagged instance
  uint64_t instances = 0;
  uint64_t class0 = 0;    //!< flagged instances predicted 0
  uint64_t class1 = 0;

  issue_tally& operator+=( const issue_tally& o )
  {
    functions += o.functions;
    instances += o.instances;
    class0 += o.class0;
    class1 += o.class1;
    return *this;
  }
  friend bool operator==( const issue_tally&, const issue_tally& ) = default;
};

struct census_stats
{
  int num_features = 0;
  census_mode mode = census_mode::exhaustive;
  uint64_t seed = 0;
  uint64_t functions_total = 0;   //!< 2^(2^m) - 2
  uint64_t functions_audited = 0;
  uint64_t instances_audited = 0;
  std::array<issue_tally, num_issues> issues{};
  uint64_t implication_violations = 0; //!< always 0; counted, not assumed
  std::string registry_version;
  double elapsed_seconds = 0.0;

  //! percentage in tenths, rounded half-up: 19 means 1.9%
  static uint64_t pct_tenths( uint64_t count, uint64_t total )
  {
    return total == 0 ? 0 : ( count * 1000 + total / 2 ) / total;
  }
  //! "d.d" formatting of pct_tenths
  static std::string pct_string( uint64_t count, uint64_t total );
};

/*! \brief Total number of non-constant functions on m features. */
uint64_t function_space_size( int num_features );

/*! \brief The function with the given index (1-based, ascending bitstring). */
truth_table function_at( int num_features, uint64_t index );

/*! \brief Deterministic stream over the census domain: ascending indices in
    exhaustive mode, a seeded uniform draw without replacement in sampled
    mode. */
class function_enumerator
{
public:
  function_enumerator( int num_features, census_mode mode, uint64_t seed = 0,
                       uint64_t sample_count = 0 );

  uint64_t count() const { return ( uint64_t )indices_.size() + ( exhaustive_ ? total_ : 0 ); }
  std::optional<truth_table> next();

  /*! \brief The full index sequence (materialized; used for partitioning). */
  std::vector<uint64_t> indices() const;

private:
  int num_features_;
  bool exhaustive_;
  uint64_t total_ = 0;
  uint64_t cursor_ = 0;
  std::vector<uint64_t> indices_; // sampled mode only
};

/*! \brief Function-level flags plus every per-instance record. */
struct function_audit
{
  std::array<bool, num_issues> flags{};
  std::vector<audit_record> instances; // row order
};

function_audit audit_function( const truth_table& table,
                               const issue_registry& registry = issue_registry::default_v1() );

census_stats run_census( const census_config& config );

/*! \brief Per-issue class-0 vs class-1 instance counts. */
struct parity_summary
{
  bool exhaustive = false; //!< sampled runs carry no exactness claim
  bool all_equal = true;
  std::array<int64_t, num_issues> deviation{}; //!< class1 - class0 per issue
};

parity_summary parity_report( const census_stats& stats );

} // namespace ttx
