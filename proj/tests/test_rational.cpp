#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include <ttx/rational.hpp>

using namespace ttx;

TEST_CASE( "construction canonicalizes" )
{
  CHECK( rational( 6, 4 ) == rational( 3, 2 ) );
  CHECK( rational( 6, 4 ).numerator() == 3 );
  CHECK( rational( 6, 4 ).denominator() == 2 );
  CHECK( rational( 2, -4 ) == rational( -1, 2 ) );
  CHECK( rational( -2, -4 ) == rational( 1, 2 ) );
  CHECK( rational( 0, -7 ) == rational( 0 ) );
  CHECK( rational( 0, 7 ).denominator() == 1 );
  CHECK( rational().is_zero() );
  CHECK_THROWS_AS( rational( 1, 0 ), std::invalid_argument );
}

TEST_CASE( "formatting and parsing round-trip" )
{
  CHECK( rational( 3, 2 ).str() == "3/2" );
  CHECK( rational( -1, 2 ).str() == "-1/2" );
  CHECK( rational( 5 ).str() == "5" );
  CHECK( rational( 0 ).str() == "0" );
  CHECK( rational( -23, 192 ).str() == "-23/192" );
  CHECK( rational::parse( "-23/192" ) == rational( -23, 192 ) );
  CHECK( rational::parse( "11/64" ) == rational( 11, 64 ) );
  CHECK( rational::parse( "7" ) == rational( 7 ) );
  CHECK( rational::parse( "4/6" ) == rational( 2, 3 ) );
  CHECK_THROWS_AS( rational::parse( "x" ), std::invalid_argument );
  CHECK_THROWS_AS( rational::parse( "1/z" ), std::invalid_argument );

  std::mt19937_64 rng( 11 );
  for ( int k = 0; k < 500; ++k )
  {
    const rational r( int64_t( rng() % 2001 ) - 1000, int64_t( rng() % 999 ) + 1 );
    CHECK( rational::parse( r.str() ) == r );
  }
}

TEST_CASE( "arithmetic identities on a random grid" )
{
  std::mt19937_64 rng( 7 );
  const auto draw = [&] {
    return rational( int64_t( rng() % 201 ) - 100, int64_t( rng() % 99 ) + 1 );
  };
  for ( int k = 0; k < 1000; ++k )
  {
    const rational a = draw(), b = draw(), c = draw();
    CHECK( a + b == b + a );
    CHECK( ( a + b ) + c == a + ( b + c ) );
    CHECK( ( a + b ) - b == a );
    CHECK( a * b == b * a );
    CHECK( a * ( b + c ) == a * b + a * c );
    if ( !b.is_zero() )
    {
      CHECK( ( a * b ) / b == a );
    }
    CHECK( a - a == rational( 0 ) );
    CHECK( a + ( -a ) == rational( 0 ) );
  }
}

TEST_CASE( "exact comparison" )
{
  CHECK( rational( 1, 3 ) < rational( 1, 2 ) );
  CHECK( rational( -1, 2 ) < rational( -1, 3 ) );
  CHECK( rational( 2, 4 ) <= rational( 1, 2 ) );
  CHECK( rational( 2, 4 ) >= rational( 1, 2 ) );
  CHECK( rational( 11, 64 ) > rational( 23, 192 ) ); // 33/192 vs 23/192
  CHECK( rational( 1000000006, 1000000007 ) < rational( 1000000007, 1000000008 ) );

  std::mt19937_64 rng( 3 );
  for ( int k = 0; k < 1000; ++k )
  {
    const rational a( int64_t( rng() % 401 ) - 200, int64_t( rng() % 99 ) + 1 );
    const rational b( int64_t( rng() % 401 ) - 200, int64_t( rng() % 99 ) + 1 );
    const int ordered = ( a < b ) + ( a == b ) + ( b < a );
    CHECK( ordered == 1 ); // exactly one of <, ==, > holds
    CHECK( ( a < b ) == ( ( b - a ).sign() > 0 ) ); // order agrees with subtraction
  }
}

TEST_CASE( "sign, abs and zero tests" )
{
  CHECK( rational( -3, 7 ).sign() == -1 );
  CHECK( rational( 3, 7 ).sign() == 1 );
  CHECK( rational( 0 ).sign() == 0 );
  CHECK( rational( -3, 7 ).abs() == rational( 3, 7 ) );
  CHECK( rational( 3, 7 ).abs() == rational( 3, 7 ) );
  CHECK( rational( 0, 5 ).is_zero() );
  CHECK_THROWS_AS( rational( 1, 2 ) / rational( 0 ), std::invalid_argument );
}

TEST_CASE( "128-bit intermediates avoid premature overflow" )
{
  // (2^40/3) * (3/2^40) stays exact even though the cross products exceed 64 bit
  const rational big( int64_t( 1 ) << 40, 3 );
  const rational inv( 3, int64_t( 1 ) << 40 );
  CHECK( big * inv == rational( 1 ) );
  const rational a( INT64_MAX / 2, 1 );
  CHECK( a + a == rational( INT64_MAX - 1, 1 ) );
}

TEST_CASE( "true 64-bit overflow is loud, never silent" )
{
  const rational a( INT64_MAX, 1 );
  CHECK_THROWS_AS( a + a, std::overflow_error );
  CHECK_THROWS_AS( a * rational( 2 ), std::overflow_error );
  CHECK_THROWS_AS( rational::from_int128( ( __int128 )1 << 100, 1 ), std::overflow_error );
  CHECK_THROWS_AS( rational::from_int128( 1, ( __int128 )1 << 100 ), std::overflow_error );
  CHECK( rational::from_int128( ( __int128 )1 << 100, ( __int128 )1 << 99 ) == rational( 2 ) );
  CHECK_THROWS_AS( rational::from_int128( 1, 0 ), std::invalid_argument );
}

TEST_CASE( "decimal approximation is close" )
{
  CHECK( rational( 1, 3 ).approx() == doctest::Approx( 1.0 / 3.0 ) );
  CHECK( rational( -23, 192 ).approx() == doctest::Approx( -0.11979166666 ) );
  CHECK( rational( 11, 64 ).approx() == doctest::Approx( 0.171875 ) );
}
