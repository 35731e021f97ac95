/*!
  \file json_io.hpp
  \brief JSON serialization and report rendering for audit and census results.

  The JSON layouts are part of the tool's external contract and are kept
  byte-stable: key order is fixed, numbers are exact integers or fraction
  strings, and nothing schedule-dependent (such as elapsed time) is included,
  so identical runs produce identical bytes regardless of worker count.
*/

#pragma once

#include <string>

#include <json.hpp>

#include "ttx/audit.hpp"
#include "ttx/census.hpp"

namespace ttx
{

/*! \brief One audited instance:
    `{"m", "function", "instance_row", "prediction", "relevant", "irrelevant",
      "sv", "issues", "witnesses", "registry_version"}`.
    `sv` holds exact fraction strings, feature 1 first; `witnesses` lists the
    witness features only for issues that are present. */
nlohmann::ordered_json audit_record_json( const audit_record& record );

/*! \brief Census statistics:
    `{"m", "functions", "issues": {"I1": {"functions", "pct", "instances",
      "class0", "class1"}, ...}, "registry_version", "seed"}`.
    `pct` is the function-level percentage with one decimal. */
nlohmann::ordered_json census_stats_json( const census_stats& stats );

/*! \brief Human-readable census table: per-issue function and instance counts
    with percentages at both granularities, class split, parity verdict, and
    run metadata (including elapsed time, which the JSON deliberately omits). */
std::string render_census_table( const census_stats& stats );

} // namespace ttx
