#include "oerc/reservoir.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <sstream>

using namespace oerc;

namespace
{

InputMask ones( std::size_t n ) {
    return InputMask{ std::vector<double>( n, 1.0 ) };
}

std::vector<double> random_inputs( std::uint64_t seed, std::size_t n, double lo, double hi ) {
    Rng                 rng( seed );
    std::vector<double> u( n );
    for ( auto & v : u ) {
        v = rng.uniform( lo, hi );
    }
    return u;
}

} // namespace

TEST( Step, ZeroGainsGiveZero ) {
    const std::vector<double> prev{ 0.3, -0.7, 0.9 };
    const auto                x = step( prev, 0.4, 1.2, ones( 3 ), 0.0, 0.0 );
    for ( const double v : x ) {
        EXPECT_EQ( v, 0.0 );
    }
}

TEST( Step, InputOnlySaturates ) {
    const std::vector<double> prev( 4, 0.5 );
    const auto x = step( prev, 0.5, std::numbers::pi / 2, ones( 4 ), 0.0, 1.0 );
    for ( const double v : x ) {
        EXPECT_DOUBLE_EQ( v, 1.0 );
    }
}

TEST( Step, HandEvaluatedRing ) {
    const std::vector<double> prev{ 0.6, 0.8 };
    const auto                x = step( prev, 0.2, 0.0, ones( 2 ), 0.5, 0.0 );
    ASSERT_EQ( x.size(), 2u );
    EXPECT_NEAR( x[0], std::sin( 0.1 ), 1e-15 );
    EXPECT_NEAR( x[1], std::sin( 0.3 ), 1e-15 );
    EXPECT_NEAR( x[0], 0.0998, 1e-4 );
    EXPECT_NEAR( x[1], 0.2955, 1e-4 );
}

TEST( Step, LengthMismatchThrows ) {
    const std::vector<double> prev{ 0.1, 0.2, 0.3 };
    EXPECT_THROW( (void)step( prev, 0.0, 1.0, ones( 2 ), 0.5, 0.5 ), std::invalid_argument );
}

TEST( RunReservoir, ZeroInputStaysAtRest ) {
    ReservoirConfig cfg;
    cfg.n_neurons = 5;
    Rng        rng( 3 );
    const auto mask  = make_mask( rng, 5 );
    const auto trace = run_reservoir( std::vector<double>( 40, 0.0 ), mask, cfg );
    EXPECT_EQ( trace.timesteps(), 40u );
    EXPECT_EQ( trace.n_neurons(), 5u );
    for ( const double v : trace.states.data() ) {
        EXPECT_EQ( v, 0.0 );
    }
}

TEST( RunReservoir, NoInputCouplingStaysAtRest ) {
    ReservoirConfig cfg;
    cfg.n_neurons     = 6;
    cfg.feedback_gain = 1.0;
    cfg.input_gain    = 0.0;
    Rng        rng( 3 );
    const auto mask  = make_mask( rng, 6 );
    const auto trace = run_reservoir( random_inputs( 4, 100, -3, 3 ), mask, cfg );
    for ( const double v : trace.states.data() ) {
        EXPECT_EQ( v, 0.0 );
    }
}

TEST( RunReservoir, MatchesChainedSteps ) {
    ReservoirConfig cfg;
    cfg.n_neurons     = 2;
    cfg.feedback_gain = 0.5;
    cfg.input_gain    = 0.7;
    const InputMask           mask{ { 0.3, -0.9 } };
    const std::vector<double> u{ 0.4, -1.1, 2.0 };
    const auto                trace = run_reservoir( u, mask, cfg );

    std::vector<double> prev( 2, 0.0 );
    double              lagged = 0.0;
    for ( std::size_t n = 0; n < u.size(); ++n ) {
        const auto next = step( prev, lagged, u[n], mask, 0.5, 0.7 );
        lagged          = prev.back();
        prev            = next;
        for ( std::size_t i = 0; i < 2; ++i ) {
            EXPECT_NEAR( trace.states( n, i ), next[i], 1e-15 ) << n << ' ' << i;
        }
    }
}

TEST( RunReservoir, EmptyOrMismatchedThrows ) {
    ReservoirConfig cfg;
    cfg.n_neurons = 3;
    EXPECT_THROW( (void)run_reservoir( {}, ones( 3 ), cfg ), std::invalid_argument );
    EXPECT_THROW( (void)run_reservoir( std::vector<double>{ 1.0 }, ones( 4 ), cfg ),
                  std::invalid_argument );
}

TEST( RunReservoir, BoundedAndDeterministic ) {
    ReservoirConfig cfg;
    cfg.n_neurons     = 20;
    cfg.feedback_gain = 1.05;
    cfg.input_gain    = 1.5;
    for ( std::uint64_t seed = 0; seed < 5; ++seed ) {
        Rng        rng( seed );
        const auto mask = make_mask( rng, cfg.n_neurons );
        const auto u    = random_inputs( seed + 100, 2000, -10, 10 );
        const auto a    = run_reservoir( u, mask, cfg );
        const auto b    = run_reservoir( u, mask, cfg );
        EXPECT_EQ( a.states, b.states );
        for ( const double v : a.states.data() ) {
            ASSERT_GE( v, -1.0 );
            ASSERT_LE( v, 1.0 );
        }
    }
}

TEST( RunReservoir, StreamingMatchesBatch ) {
    ReservoirConfig cfg;
    cfg.n_neurons = 7;
    Rng        rng( 11 );
    const auto mask  = make_mask( rng, 7 );
    const auto u     = random_inputs( 12, 300, -3, 3 );
    const auto trace = run_reservoir( u, mask, cfg );
    Reservoir  r( mask, cfg.feedback_gain, cfg.input_gain );
    for ( std::size_t n = 0; n < u.size(); ++n ) {
        const auto x = r.advance( u[n] );
        for ( std::size_t i = 0; i < 7; ++i ) {
            ASSERT_EQ( x[i], trace.states( n, i ) );
        }
    }
}

// Two different starting states driven by the same input forget where they
// started: the ring contracts by at most alpha per step.
TEST( RunReservoir, EchoStateConvergence ) {
    const std::size_t n = 25;
    Rng               rng( 21 );
    const auto        mask = make_mask( rng, n );
    for ( const double alpha : { 0.5, 0.8, 0.95 } ) {
        for ( const double beta : { 0.0, 0.4 } ) {
            std::vector<double> a( n ), b( n );
            for ( std::size_t i = 0; i < n; ++i ) {
                a[i] = rng.uniform( -1, 1 );
                b[i] = rng.uniform( -1, 1 );
            }
            double     la = rng.uniform( -1, 1 ), lb = rng.uniform( -1, 1 );
            const auto u  = random_inputs( 22, 20 * n, -1, 1 );
            for ( const double v : u ) {
                auto na = step( a, la, v, mask, alpha, beta );
                auto nb = step( b, lb, v, mask, alpha, beta );
                la      = a.back();
                lb      = b.back();
                a       = std::move( na );
                b       = std::move( nb );
            }
            double diff = 0.0;
            for ( std::size_t i = 0; i < n; ++i ) {
                diff = std::max( diff, std::abs( a[i] - b[i] ) );
            }
            EXPECT_LT( diff, 1e-6 ) << alpha << ' ' << beta;
        }
    }
}

TEST( Trace, CsvHeader ) {
    ReservoirConfig cfg;
    cfg.n_neurons = 3;
    const auto trace = run_reservoir( std::vector<double>{ 0.5, 0.1 }, ones( 3 ), cfg );
    std::ostringstream os;
    write_trace_csv( os, trace );
    std::istringstream is( os.str() );
    std::string        line;
    std::getline( is, line );
    EXPECT_EQ( line, "n,x_0,x_1,x_2" );
    int rows = 0;
    while ( std::getline( is, line ) ) {
        ++rows;
    }
    EXPECT_EQ( rows, 2 );
}
