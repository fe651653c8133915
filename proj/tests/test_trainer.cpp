#include "oerc/trainer.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <sstream>

using namespace oerc;

namespace
{

TaskData channel_task( std::uint64_t seed, std::size_t train, std::size_t test ) {
    Rng root( seed );
    Rng tr = root.derive( "train" ), te = root.derive( "test" );
    return make_task( TaskKind::ChannelEq, tr, te, train, test );
}

TaskData narma_task( std::uint64_t seed, std::size_t train, std::size_t test ) {
    Rng root( seed );
    Rng tr = root.derive( "train" ), te = root.derive( "test" );
    return make_task( TaskKind::Narma10, tr, te, train, test );
}

// Plain Gaussian elimination with partial pivoting on the normal equations.
std::vector<double> normal_solve( const Matrix & x, const std::vector<double> & d, double ridge ) {
    const std::size_t                p = x.cols();
    std::vector<std::vector<double>> a( p, std::vector<double>( p + 1, 0.0 ) );
    for ( std::size_t r = 0; r < x.rows(); ++r ) {
        for ( std::size_t i = 0; i < p; ++i ) {
            for ( std::size_t j = 0; j < p; ++j ) {
                a[i][j] += x( r, i ) * x( r, j );
            }
            a[i][p] += x( r, i ) * d[r];
        }
    }
    for ( std::size_t i = 0; i < p; ++i ) {
        a[i][i] += ridge;
    }
    for ( std::size_t c = 0; c < p; ++c ) {
        std::size_t piv = c;
        for ( std::size_t r = c + 1; r < p; ++r ) {
            if ( std::abs( a[r][c] ) > std::abs( a[piv][c] ) ) {
                piv = r;
            }
        }
        std::swap( a[c], a[piv] );
        for ( std::size_t r = 0; r < p; ++r ) {
            if ( r == c ) {
                continue;
            }
            const double f = a[r][c] / a[c][c];
            for ( std::size_t k = c; k <= p; ++k ) {
                a[r][k] -= f * a[c][k];
            }
        }
    }
    std::vector<double> w( p );
    for ( std::size_t i = 0; i < p; ++i ) {
        w[i] = a[i][p] / a[i][i];
    }
    return w;
}

double tail_mean( const std::vector<double> & v, std::size_t n ) {
    return std::accumulate( v.end() - static_cast<long>( n ), v.end(), 0.0 ) / static_cast<double>( n );
}

} // namespace

TEST( Schedule, Examples ) {
    const TrainSchedule s;
    EXPECT_DOUBLE_EQ( lambda_at( 0, s ), 0.4 );
    EXPECT_DOUBLE_EQ( lambda_at( 9, s ), 0.4 );
    EXPECT_DOUBLE_EQ( lambda_at( 10, s ), 0.4 * 0.999 );
    EXPECT_NEAR( lambda_at( 100, s ), 0.396018, 1e-6 );

    TrainSchedule flat;
    flat.lambda0    = 0.2;
    flat.lambda_min = 0.2;
    EXPECT_EQ( lambda_at( 123456, flat ), 0.2 );
}

TEST( Schedule, ClosedFormMatchesRecurrence ) {
    TrainSchedule s;
    s.lambda_min  = 0.01;
    s.update_rate = 7;
    double lambda = s.lambda0;
    double prev   = lambda;
    for ( std::size_t n = 0; n < 1000000; ++n ) {
        if ( n > 0 && n % s.update_rate == 0 ) {
            lambda = s.lambda_min + s.gamma * ( lambda - s.lambda_min );
        }
        const double closed = lambda_at( n, s );
        ASSERT_NEAR( closed, lambda, 1e-9 * lambda ) << n;
        ASSERT_LE( closed, prev );
        ASSERT_GE( closed, s.lambda_min );
        prev = closed;
    }
}

TEST( Schedule, Validation ) {
    TrainSchedule s;
    EXPECT_NO_THROW( validate_schedule( s ) );
    s.gamma = 1.0;
    EXPECT_THROW( validate_schedule( s ), ConfigError );
    s            = {};
    s.lambda_min = 0.5;
    EXPECT_THROW( validate_schedule( s ), ConfigError );
    s             = {};
    s.update_rate = 0;
    EXPECT_THROW( validate_schedule( s ), ConfigError );
}

TEST( OnlineStep, Examples ) {
    const auto w = online_step( WeightVector( 2 ), std::vector<double>{ 1.0, -2.0 }, 0.0, 1.0, 0.1 );
    EXPECT_DOUBLE_EQ( w.values[0], 0.1 );
    EXPECT_DOUBLE_EQ( w.values[1], -0.2 );
    const auto same = online_step( WeightVector( std::vector<double>{ 0.3, 0.4 } ),
                                   std::vector<double>{ 5.0, 6.0 }, 2.0, 2.0, 0.9 );
    EXPECT_EQ( same.values, ( std::vector<double>{ 0.3, 0.4 } ) );
    EXPECT_THROW( (void)online_step( WeightVector( 2 ), std::vector<double>{ 1, 1 }, NAN, 1.0, 0.1 ),
                  TrainingError );
    EXPECT_THROW( (void)online_step( WeightVector( 2 ), std::vector<double>{ 1 }, 0.0, 1.0, 0.1 ),
                  std::invalid_argument );
}

// One update on the ideal readout moves the output on the same states by
// lambda * residual * (|x|^2 + 1), the 1 coming from the offset input.
TEST( Machine, OneStepDescent ) {
    ReservoirConfig cfg;
    cfg.readout_mode = ReadoutMode::IdealLinear;
    Rng        rng( 4 );
    const auto mask = make_mask( rng, cfg.n_neurons );
    Machine    m( mask, cfg );
    for ( int i = 0; i < 30; ++i ) {
        (void)m.advance( rng.uniform( -1, 1 ) );
    }
    const double y      = m.last_output();
    const double d      = 0.8;
    const double lambda = 0.01;
    const std::vector<double> x( m.states().begin(), m.states().end() );
    const double norm2 = std::inner_product( x.begin(), x.end(), x.begin(), 0.0 );
    const double r     = m.learn( d, lambda );
    EXPECT_DOUBLE_EQ( r, d - y );
    const double y_new = ideal_output( x, m.weights() ) + m.offset();
    EXPECT_NEAR( y_new, y + lambda * r * ( norm2 + 1.0 ), 1e-12 );
    ASSERT_LT( lambda * ( norm2 + 1.0 ), 2.0 );
    EXPECT_LT( std::abs( d - y_new ), std::abs( r ) );
}

TEST( Machine, RawWeightsKeepFullPrecision ) {
    ReservoirConfig cfg;
    cfg.n_neurons = 3;
    cfg.dac_bits  = 2;
    const InputMask mask{ { 0.1, 0.2, 0.3 } };
    Machine         m( mask, cfg );
    const WeightVector w( std::vector<double>{ 0.4, 13.0, -30.0 } );
    m.set_weights( w, 0.25 );
    EXPECT_EQ( m.weights(), w );
    EXPECT_EQ( m.applied_weights(), apply_dac( w, 2, cfg.dac_range ) );
    EXPECT_EQ( m.applied_weights().values[0], 0.0 );
    EXPECT_EQ( m.offset(), 0.25 );
    EXPECT_THROW( m.set_weights( WeightVector( 2 ) ), std::invalid_argument );
}

TEST( Machine, OffsetOffIgnoresOffset ) {
    ReservoirConfig cfg;
    cfg.n_neurons     = 2;
    cfg.output_offset = false;
    Machine m( InputMask{ { 1.0, 1.0 } }, cfg );
    m.set_weights( WeightVector( 2 ), 3.0 );
    EXPECT_EQ( m.offset(), 0.0 );
    EXPECT_EQ( m.advance( 0.0 ), 0.0 );
}

TEST( Training, ConstantTargetWithoutInputCoupling ) {
    ReservoirConfig cfg;
    cfg.input_gain = 0.0;
    TaskData task  = narma_task( 1, 3000, 100 );
    std::fill( task.target.begin(), task.target.end(), 0.7 );
    TrainSchedule s;
    s.train_len = 3000;
    Rng        rng( 2 );
    const auto mask = make_mask( rng, cfg.n_neurons );
    const auto out  = train_online( task, mask, cfg, s );
    for ( const double w : out.weights.values ) {
        EXPECT_EQ( w, 0.0 );
    }
    EXPECT_LT( out.log.sq_error.back(), 1e-12 );
}

TEST( Training, LogShapeAndDeterminism ) {
    const auto    task = channel_task( 3, 2000, 500 );
    TrainSchedule s;
    s.train_len = 2000;
    Rng             rng( 9 );
    ReservoirConfig cfg;
    const auto      mask = make_mask( rng, cfg.n_neurons );
    const auto      a    = run_online( task, mask, cfg, s );
    const auto      b    = run_online( task, mask, cfg, s );
    EXPECT_EQ( a.training.weights, b.training.weights );
    EXPECT_EQ( a.test_output, b.test_output );
    ASSERT_EQ( a.training.log.sq_error.size(), 2000u );
    ASSERT_EQ( a.training.log.lambda.size(), 2000u );
    for ( std::size_t n = 0; n < 2000; ++n ) {
        ASSERT_NEAR( a.training.log.lambda[n], lambda_at( n, s ), 1e-12 );
    }
    EXPECT_EQ( a.test_output.size(), 500u );
    EXPECT_EQ( a.training.log.final_weights, a.training.weights );

    std::ostringstream os;
    a.training.log.write_csv( os );
    EXPECT_EQ( os.str().substr( 0, os.str().find( '\n' ) ), "n,lambda,sq_error" );

    const auto frozen = run_frozen( task, mask, cfg, a.training.weights, 0.0 );
    EXPECT_EQ( frozen.size(), 500u );
}

TEST( Training, ShortTaskIsRejected ) {
    const auto      task = channel_task( 3, 100, 50 );
    ReservoirConfig cfg;
    Rng             rng( 9 );
    EXPECT_THROW( (void)train_online( task, make_mask( rng, 50 ), cfg, TrainSchedule{} ),
                  std::invalid_argument );
}

TEST( Training, IdealReadoutDivergesAtTheDefaultStep ) {
    const auto      task = channel_task( 5, 3000, 100 );
    ReservoirConfig cfg;
    cfg.readout_mode = ReadoutMode::IdealLinear;
    TrainSchedule s;
    s.train_len = 3000;
    Rng rng( 5 );
    EXPECT_THROW( (void)train_online( task, make_mask( rng, 50 ), cfg, s ), DivergenceError );
}

TEST( Training, SmallStepDescendsOnBothTasks ) {
    for ( const auto & task : { channel_task( 6, 20000, 100 ), narma_task( 6, 20000, 100 ) } ) {
        ReservoirConfig cfg;
        cfg.readout_mode = ReadoutMode::IdealLinear;
        if ( task.kind == TaskKind::Narma10 ) {
            cfg.feedback_gain = 0.95;
            cfg.input_gain    = 0.8;
        }
        TrainSchedule s;
        s.lambda0   = 0.005;
        s.train_len = 20000;
        Rng        rng( 6 );
        const auto out = train_online( task, make_mask( rng, 50 ), cfg, s );
        const std::vector<double> & e = out.log.sq_error;
        const double first = std::accumulate( e.begin() + 10, e.begin() + 1010, 0.0 ) / 1000.0;
        EXPECT_LT( tail_mean( e, 1000 ), 0.5 * first ) << to_string( task.kind );
    }
}

TEST( Ridge, SingleNeuronIdentity ) {
    Matrix              x( 5, 1 );
    std::vector<double> d( 5 );
    for ( std::size_t r = 0; r < 5; ++r ) {
        x( r, 0 ) = static_cast<double>( r ) - 2.0;
        d[r]      = x( r, 0 );
    }
    EXPECT_NEAR( ridge_solve( x, d, 0.0 ).values[0], 1.0, 1e-14 );
    EXPECT_NEAR( ridge_solve( x, d, 10.0 ).values[0], 10.0 / 20.0, 1e-14 );
}

TEST( Ridge, MatchesEliminationOracle ) {
    Rng rng( 77 );
    for ( int trial = 0; trial < 20; ++trial ) {
        const std::size_t   p = 1 + rng.bits( 3 ), rows = 40 + rng.bits( 5 );
        Matrix              x( rows, p );
        std::vector<double> d( rows );
        for ( std::size_t r = 0; r < rows; ++r ) {
            for ( std::size_t c = 0; c < p; ++c ) {
                x( r, c ) = rng.normal();
            }
            d[r] = rng.normal();
        }
        const double ridge = trial % 2 ? 0.0 : 0.3;
        const auto   w     = ridge_solve( x, d, ridge );
        const auto   o     = normal_solve( x, d, ridge );
        for ( std::size_t c = 0; c < p; ++c ) {
            ASSERT_NEAR( w.values[c], o[c], 1e-8 );
        }
    }
}

TEST( Ridge, SingularWithoutRegularisation ) {
    Matrix              x( 4, 2 );
    std::vector<double> d{ 1, 2, 3, 4 };
    for ( std::size_t r = 0; r < 4; ++r ) {
        x( r, 0 ) = static_cast<double>( r );
        x( r, 1 ) = static_cast<double>( r );
    }
    EXPECT_THROW( (void)ridge_solve( x, d, 0.0 ), NumericalError );
    EXPECT_NO_THROW( (void)ridge_solve( x, d, 1e-3 ) );
    EXPECT_THROW( (void)ridge_solve( x, std::vector<double>{ 1 }, 1.0 ), std::invalid_argument );
}

TEST( Ridge, OfflineFitEqualizesTheChannel ) {
    const auto      task = channel_task( 8, 5000, 5000 );
    ReservoirConfig cfg;
    Rng             rng( 8 );
    const auto      mask = make_mask( rng, cfg.n_neurons );
    const auto      fit  = train_offline_ridge( task, mask, cfg );
    EXPECT_EQ( fit.weights.size(), cfg.n_neurons );
    const auto y = run_frozen( task, mask, cfg, fit.weights, fit.offset );
    EXPECT_LT( ser( y, task.test_target(), cfg.washout ), 0.02 );
}

// With the ideal readout the fitted weights reproduce the training targets as
// well as any linear map of the raw states can.
TEST( Ridge, OfflineIdealFitMatchesDirectRegression ) {
    const auto      task = narma_task( 9, 600, 10 );
    ReservoirConfig cfg;
    cfg.n_neurons    = 8;
    cfg.readout_mode = ReadoutMode::IdealLinear;
    Rng        rng( 9 );
    const auto mask  = make_mask( rng, cfg.n_neurons );
    const auto fit   = train_offline_ridge( task, mask, cfg, 1e-6 );
    const auto trace = run_reservoir( task.input, mask, cfg );
    Matrix     x( task.train_len, cfg.n_neurons + 1 );
    std::vector<double> d( task.train_len );
    for ( std::size_t r = 0; r < task.train_len; ++r ) {
        for ( std::size_t c = 0; c < cfg.n_neurons; ++c ) {
            x( r, c ) = trace.states( r, c );
        }
        x( r, cfg.n_neurons ) = 1.0;
        d[r]                  = task.target[r];
    }
    const auto o = normal_solve( x, d, 1e-6 );
    for ( std::size_t c = 0; c < cfg.n_neurons; ++c ) {
        EXPECT_NEAR( fit.weights.values[c], o[c], 1e-6 );
    }
    EXPECT_NEAR( fit.offset, o.back(), 1e-6 );
}
