#include "ttx/model.hpp"

#include <algorithm>

namespace ttx
{

truth_table::truth_table( int num_features, std::vector<uint8_t> values )
    : num_features_( num_features ), values_( std::move( values ) )
{
  if ( num_features_ < 1 || num_features_ > max_features )
  {
    throw std::invalid_argument( "truth_table: feature count must be in [1, " +
                                 std::to_string( max_features ) + "]" );
  }
  if ( values_.size() != num_rows() )
  {
    throw std::invalid_argument( "truth_table: expected " + std::to_string( num_rows() ) +
                                 " values, got " + std::to_string( values_.size() ) );
  }
  for ( uint8_t v : values_ )
  {
    if ( v > 1 )
    {
      throw std::invalid_argument( "truth_table: values must be 0 or 1" );
    }
  }
  is_constant_ = std::all_of( values_.begin(), values_.end(),
                              [&]( uint8_t v ) { return v == values_[0]; } );
}

std::string truth_table::bit_string() const
{
  std::string s( values_.size(), '0' );
  for ( size_t i = 0; i < values_.size(); ++i )
  {
    s[i] = values_[i] ? '1' : '0';
  }
  return s;
}

truth_table truth_table::complemented() const
{
  std::vector<uint8_t> flipped( values_.size() );
  for ( size_t i = 0; i < values_.size(); ++i )
  {
    flipped[i] = values_[i] ^ 1u;
  }
  return truth_table( num_features_, std::move( flipped ) );
}

uint64_t row_index( const point& p )
{
  uint64_t idx = 0;
  for ( uint8_t b : p )
  {
    idx = ( idx << 1 ) | b;
  }
  return idx + 1;
}

point point_from_row( int num_features, uint64_t row )
{
  point p( num_features );
  uint64_t idx = row - 1;
  for ( int i = num_features - 1; i >= 0; --i )
  {
    p[i] = idx & 1u;
    idx >>= 1;
  }
  return p;
}

uint8_t eval( const truth_table& table, const point& p )
{
  if ( ( int )p.size() != table.num_features() )
  {
    throw std::invalid_argument( "eval: point has " + std::to_string( p.size() ) +
                                 " bits, table expects " + std::to_string( table.num_features() ) );
  }
  return table.value_at_row( row_index( p ) );
}

std::vector<point> all_points( int num_features )
{
  if ( num_features < 1 || num_features > max_features )
  {
    throw std::invalid_argument( "all_points: feature count out of range" );
  }
  const uint64_t n = uint64_t( 1 ) << num_features;
  std::vector<point> out;
  out.reserve( n );
  for ( uint64_t row = 1; row <= n; ++row )
  {
    out.push_back( point_from_row( num_features, row ) );
  }
  return out;
}

truth_table parse_truth_table( std::string_view text )
{
  // line 1: "tt <m>"
  auto eol = text.find( '\n' );
  if ( eol == std::string_view::npos )
  {
    throw parse_error( 1, 1, "missing value line (expected two lines: header, bits)" );
  }
  std::string_view header = text.substr( 0, eol );
  if ( header.substr( 0, 3 ) != "tt " )
  {
    throw parse_error( 1, 1, "bad header, expected 'tt <m>'" );
  }
  std::string_view m_text = header.substr( 3 );
  if ( m_text.empty() )
  {
    throw parse_error( 1, 4, "missing feature count" );
  }
  int m = 0;
  for ( size_t i = 0; i < m_text.size(); ++i )
  {
    if ( m_text[i] < '0' || m_text[i] > '9' )
    {
      throw parse_error( 1, ( int )( 4 + i ), "feature count must be a decimal integer" );
    }
    m = m * 10 + ( m_text[i] - '0' );
    if ( m > max_features )
    {
      throw parse_error( 1, 4, "feature count exceeds the cap of " + std::to_string( max_features ) );
    }
  }
  if ( m < 1 )
  {
    throw parse_error( 1, 4, "feature count must be at least 1" );
  }

  // line 2: 2^m characters in {0,1}, optional trailing newline
  std::string_view body = text.substr( eol + 1 );
  const uint64_t expected = uint64_t( 1 ) << m;
  std::vector<uint8_t> values;
  values.reserve( expected );
  size_t pos = 0;
  for ( ; pos < body.size() && body[pos] != '\n'; ++pos )
  {
    const char c = body[pos];
    if ( c != '0' && c != '1' )
    {
      throw parse_error( 2, ( int )( pos + 1 ), std::string( "invalid character '" ) + c + "', expected 0 or 1" );
    }
    values.push_back( c == '1' );
  }
  if ( values.size() != expected )
  {
    throw parse_error( 2, ( int )( values.size() + 1 ),
                       "expected " + std::to_string( expected ) + " value bits, got " +
                           std::to_string( values.size() ) );
  }
  if ( pos < body.size() )
  {
    // only a single trailing newline may follow the bits
    if ( pos + 1 != body.size() )
    {
      throw parse_error( 3, 1, "trailing content after value line" );
    }
  }
  return truth_table( m, std::move( values ) );
}

std::string serialize_truth_table( const truth_table& table )
{
  return "tt " + std::to_string( table.num_features() ) + "\n" + table.bit_string() + "\n";
}

explanation_problem::explanation_problem( truth_table table, point instance )
    : table_( std::move( table ) ), instance_( std::move( instance ) )
{
  if ( ( int )instance_.size() != table_.num_features() )
  {
    throw std::invalid_argument( "explanation_problem: instance has " +
                                 std::to_string( instance_.size() ) + " bits, table expects " +
                                 std::to_string( table_.num_features() ) );
  }
  for ( uint8_t b : instance_ )
  {
    if ( b > 1 )
    {
      throw std::invalid_argument( "explanation_problem: instance bits must be 0 or 1" );
    }
  }
  if ( table_.is_constant() )
  {
    throw constant_function_error( "explanation_problem: classifier is constant" );
  }
  instance_row_ = row_index( instance_ );
  prediction_ = table_.value_at_row( instance_row_ );
}

} // namespace ttx
