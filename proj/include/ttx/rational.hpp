/*!
  \file rational.hpp
  \brief Exact fraction arithmetic on 64-bit numerator/denominator.

  Every value is kept in canonical form (gcd 1, positive denominator).
  Intermediate products are evaluated in 128-bit; a result whose canonical
  form does not fit 64 bits raises std::overflow_error instead of rounding.
*/

#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <string_view>

namespace ttx
{

namespace detail
{

inline unsigned __int128 gcd128( unsigned __int128 a, unsigned __int128 b )
{
  while ( b != 0 )
  {
    unsigned __int128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

inline unsigned __int128 abs128( __int128 x )
{
  return x < 0 ? -( unsigned __int128 )x : ( unsigned __int128 )x;
}

} // namespace detail

/*! \brief Exact rational number.

  Canonical invariants: denominator > 0 and gcd(|num|, den) == 1; zero is 0/1.
*/
class rational
{
public:
  constexpr rational() = default;

  rational( int64_t value ) : num_( value ), den_( 1 ) {}

  rational( int64_t numerator, int64_t denominator )
  {
    if ( denominator == 0 )
    {
      throw std::invalid_argument( "rational: zero denominator" );
    }
    if ( denominator < 0 )
    {
      numerator = -numerator;
      denominator = -denominator;
    }
    const int64_t g = std::gcd( numerator < 0 ? -numerator : numerator, denominator );
    num_ = g ? numerator / g : 0;
    den_ = g ? denominator / g : 1;
  }

  int64_t numerator() const { return num_; }
  int64_t denominator() const { return den_; }

  bool is_zero() const { return num_ == 0; }
  int sign() const { return num_ == 0 ? 0 : ( num_ < 0 ? -1 : 1 ); }

  rational abs() const
  {
    rational r = *this;
    if ( r.num_ < 0 )
    {
      r.num_ = -r.num_;
    }
    return r;
  }

  rational operator-() const
  {
    rational r = *this;
    r.num_ = -r.num_;
    return r;
  }

  friend rational operator+( const rational& a, const rational& b )
  {
    const int64_t g = std::gcd( a.den_, b.den_ );
    const __int128 n = ( __int128 )a.num_ * ( b.den_ / g ) + ( __int128 )b.num_ * ( a.den_ / g );
    const __int128 d = ( __int128 )a.den_ * ( b.den_ / g );
    return from_int128( n, d );
  }

  friend rational operator-( const rational& a, const rational& b ) { return a + ( -b ); }

  friend rational operator*( const rational& a, const rational& b )
  {
    // cross-reduce so the product is already canonical
    const int64_t g1 = std::gcd( a.num_ < 0 ? -a.num_ : a.num_, b.den_ );
    const int64_t g2 = std::gcd( b.num_ < 0 ? -b.num_ : b.num_, a.den_ );
    const __int128 n = ( __int128 )( a.num_ / g1 ) * ( b.num_ / g2 );
    const __int128 d = ( __int128 )( a.den_ / g2 ) * ( b.den_ / g1 );
    return from_int128_reduced( n, d );
  }

  friend rational operator/( const rational& a, const rational& b )
  {
    if ( b.num_ == 0 )
    {
      throw std::invalid_argument( "rational: division by zero" );
    }
    return a * rational( b.den_, b.num_ );
  }

  rational& operator+=( const rational& o ) { return *this = *this + o; }
  rational& operator-=( const rational& o ) { return *this = *this - o; }
  rational& operator*=( const rational& o ) { return *this = *this * o; }

  friend bool operator==( const rational& a, const rational& b )
  {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend bool operator!=( const rational& a, const rational& b ) { return !( a == b ); }

  friend bool operator<( const rational& a, const rational& b )
  {
    return ( __int128 )a.num_ * b.den_ < ( __int128 )b.num_ * a.den_;
  }
  friend bool operator>( const rational& a, const rational& b ) { return b < a; }
  friend bool operator<=( const rational& a, const rational& b ) { return !( b < a ); }
  friend bool operator>=( const rational& a, const rational& b ) { return !( a < b ); }

  /*! \brief Canonical reduction of a 128-bit fraction; throws on 64-bit overflow. */
  static rational from_int128( __int128 n, __int128 d )
  {
    if ( d == 0 )
    {
      throw std::invalid_argument( "rational: zero denominator" );
    }
    if ( d < 0 )
    {
      n = -n;
      d = -d;
    }
    const unsigned __int128 g = detail::gcd128( detail::abs128( n ), ( unsigned __int128 )d );
    if ( g > 1 )
    {
      n /= ( __int128 )g;
      d /= ( __int128 )g;
    }
    return from_int128_reduced( n, d );
  }

  double approx() const { return static_cast<double>( num_ ) / static_cast<double>( den_ ); }

  /*! \brief "n/d" for non-integral values, plain "n" otherwise. */
  std::string str() const
  {
    if ( den_ == 1 )
    {
      return std::to_string( num_ );
    }
    return std::to_string( num_ ) + "/" + std::to_string( den_ );
  }

  /*! \brief Parses "n" or "n/d"; inverse of str() on canonical values. */
  static rational parse( std::string_view text )
  {
    const auto slash = text.find( '/' );
    try
    {
      if ( slash == std::string_view::npos )
      {
        return rational( std::stoll( std::string( text ) ) );
      }
      return rational( std::stoll( std::string( text.substr( 0, slash ) ) ),
                       std::stoll( std::string( text.substr( slash + 1 ) ) ) );
    }
    catch ( const std::logic_error& )
    {
      throw std::invalid_argument( "rational: cannot parse '" + std::string( text ) + "'" );
    }
  }

private:
  static rational from_int128_reduced( __int128 n, __int128 d )
  {
    if ( d < 0 )
    {
      n = -n;
      d = -d;
    }
    constexpr __int128 lo = -( __int128 )INT64_MAX - 1;
    constexpr __int128 hi = ( __int128 )INT64_MAX;
    if ( n < lo || n > hi || d > hi )
    {
      throw std::overflow_error( "rational: value does not fit 64-bit canonical form" );
    }
    rational r;
    r.num_ = ( int64_t )n;
    r.den_ = n == 0 ? 1 : ( int64_t )d;
    return r;
  }

  int64_t num_ = 0;
  int64_t den_ = 1;
};

} // namespace ttx
