/*!
  \file model.hpp
  \brief Boolean classifiers as complete truth tables, instances and feature sets.

  Conventions shared by every other header:
    - features are numbered 1..m;
    - a point is the bit vector (x1, ..., xm);
    - rows are 1-based with x1 as the most significant bit, so the all-zero
      point is row 1 and (1,0,...,0) is row 2^(m-1)+1.
*/

#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ttx
{

/*! \brief Hard cap on the feature count (bounds table memory at 2^20 rows). */
inline constexpr int max_features = 20;

/*! \brief A point in feature space: bits x1..xm. */
using point = std::vector<uint8_t>;

/*! \brief Raised by the .tt parser; carries the offending line and column (1-based). */
class parse_error : public std::runtime_error
{
public:
  parse_error( int line, int column, const std::string& what_arg )
      : std::runtime_error( "line " + std::to_string( line ) + ", col " + std::to_string( column ) + ": " + what_arg ),
        line_( line ), column_( column )
  {
  }
  int line() const { return line_; }
  int column() const { return column_; }

private:
  int line_;
  int column_;
};

/*! \brief Raised when an operation that needs a non-constant classifier gets a constant one. */
class constant_function_error : public std::domain_error
{
public:
  using std::domain_error::domain_error;
};

/*! \brief Subset of the features {1..m}, stored as a bitmask (feature i -> bit i-1).

  Ordering by the raw mask value gives the deterministic "lexicographic by
  bitmask" order used for all enumeration output.
*/
struct feature_set
{
  uint32_t bits = 0;

  static feature_set universe( int num_features )
  {
    return feature_set{ num_features == 32 ? ~0u : ( ( 1u << num_features ) - 1u ) };
  }

  static feature_set of( std::initializer_list<int> features )
  {
    feature_set s;
    for ( int f : features )
    {
      s = s.with( f );
    }
    return s;
  }

  bool contains( int feature ) const { return ( bits >> ( feature - 1 ) ) & 1u; }
  bool empty() const { return bits == 0; }
  int size() const { return __builtin_popcount( bits ); }

  feature_set with( int feature ) const { return feature_set{ bits | ( 1u << ( feature - 1 ) ) }; }
  feature_set without( int feature ) const { return feature_set{ bits & ~( 1u << ( feature - 1 ) ) }; }

  bool subset_of( feature_set other ) const { return ( bits & ~other.bits ) == 0; }
  bool intersects( feature_set other ) const { return ( bits & other.bits ) != 0; }

  feature_set unite( feature_set other ) const { return feature_set{ bits | other.bits }; }
  feature_set intersect( feature_set other ) const { return feature_set{ bits & other.bits }; }
  feature_set complement_in( int num_features ) const
  {
    return feature_set{ universe( num_features ).bits & ~bits };
  }

  /*! \brief Member features in ascending order. */
  std::vector<int> members() const
  {
    std::vector<int> out;
    for ( uint32_t b = bits; b; b &= b - 1 )
    {
      out.push_back( __builtin_ctz( b ) + 1 );
    }
    return out;
  }

  std::string str() const
  {
    std::string out = "{";
    bool first = true;
    for ( int f : members() )
    {
      if ( !first )
      {
        out += ",";
      }
      out += std::to_string( f );
      first = false;
    }
    return out + "}";
  }

  friend bool operator==( feature_set a, feature_set b ) { return a.bits == b.bits; }
  friend bool operator!=( feature_set a, feature_set b ) { return a.bits != b.bits; }
  friend bool operator<( feature_set a, feature_set b ) { return a.bits < b.bits; }
};

/*! \brief Complete boolean function on m features, one value bit per row.

  Constant tables are representable (the census needs to skip them explicitly)
  but flagged; building an explanation_problem on one fails.
*/
class truth_table
{
public:
  truth_table( int num_features, std::vector<uint8_t> values );

  int num_features() const { return num_features_; }
  uint64_t num_rows() const { return uint64_t( 1 ) << num_features_; }
  bool is_constant() const { return is_constant_; }

  /*! \brief Value of row r (1-based). */
  uint8_t value_at_row( uint64_t row ) const
  {
    if ( row < 1 || row > num_rows() )
    {
      throw std::out_of_range( "truth_table: row out of range" );
    }
    return values_[row - 1];
  }

  const std::vector<uint8_t>& values() const { return values_; }

  /*! \brief Row values as a string of '0'/'1', row 1 first. */
  std::string bit_string() const;

  /*! \brief Bitwise complement of the function (same feature count). */
  truth_table complemented() const;

  friend bool operator==( const truth_table& a, const truth_table& b )
  {
    return a.num_features_ == b.num_features_ && a.values_ == b.values_;
  }

private:
  int num_features_;
  std::vector<uint8_t> values_;
  bool is_constant_;
};

/*! \brief 1-based row number of a point (x1 most significant). */
uint64_t row_index( const point& p );

/*! \brief Inverse of row_index for a given feature count. */
point point_from_row( int num_features, uint64_t row );

/*! \brief Classifier application: table lookup at the point's row. */
uint8_t eval( const truth_table& table, const point& p );

/*! \brief All 2^m points in ascending row order. */
std::vector<point> all_points( int num_features );

/*! \brief Parses the `.tt` text format: "tt <m>\n<2^m bits>\n". */
truth_table parse_truth_table( std::string_view text );

/*! \brief Canonical `.tt` text; parse_truth_table round-trips it. */
std::string serialize_truth_table( const truth_table& table );

/*! \brief A classifier together with the instance to explain.

  Construction computes the predicted class and rejects constant tables, so
  every downstream operation can rely on a non-constant classifier.
*/
class explanation_problem
{
public:
  explanation_problem( truth_table table, point instance );

  const truth_table& table() const { return table_; }
  const point& instance() const { return instance_; }
  uint64_t instance_row() const { return instance_row_; }
  uint8_t prediction() const { return prediction_; }
  int num_features() const { return table_.num_features(); }

private:
  truth_table table_;
  point instance_;
  uint64_t instance_row_;
  uint8_t prediction_;
};

} // namespace ttx
