#include "oerc/trainer.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <iomanip>
#include <ostream>

namespace oerc
{

void validate_schedule( const TrainSchedule & sched ) {
    if ( !( sched.lambda_min >= 0.0 && sched.lambda_min <= sched.lambda0 ) ) {
        throw ConfigError( "lambda_min", "need 0 <= lambda_min <= lambda0" );
    }
    if ( !( sched.gamma > 0.0 && sched.gamma < 1.0 ) ) {
        throw ConfigError( "gamma", "must lie in (0, 1)" );
    }
    if ( sched.update_rate < 1 ) {
        throw ConfigError( "update_rate", "must be positive" );
    }
    if ( sched.train_len < 1 ) {
        throw ConfigError( "train_len", "must be positive" );
    }
}

double lambda_at( std::size_t n, const TrainSchedule & sched ) {
    const auto m = static_cast<double>( n / sched.update_rate );
    return sched.lambda_min + std::pow( sched.gamma, m ) * ( sched.lambda0 - sched.lambda_min );
}

WeightVector online_step( WeightVector w, std::span<const double> sensed, double y, double d,
                          double lambda ) {
    if ( sensed.size() != w.size() ) {
        throw std::invalid_argument( "online_step: state and weight lengths differ" );
    }
    if ( !std::isfinite( y ) || !std::isfinite( d ) ) {
        throw TrainingError( "online_step: non-finite output or target" );
    }
    const double gain = lambda * ( d - y );
    for ( std::size_t i = 0; i < w.size(); ++i ) {
        w.values[i] += gain * sensed[i];
    }
    return w;
}

void TrainLog::write_csv( std::ostream & out ) const {
    out << "n,lambda,sq_error\n" << std::setprecision( 17 );
    for ( std::size_t n = 0; n < sq_error.size(); ++n ) {
        out << n << ',' << lambda[n] << ',' << sq_error[n] << '\n';
    }
}

Machine::Machine( const InputMask & mask, const ReservoirConfig & cfg ) :
    m_cfg( validate_config( cfg ) ),
    m_reservoir( mask, cfg.feedback_gain, cfg.input_gain ),
    m_integrator( cfg.n_neurons, cfg.rc_ratio, cfg.kernel_sign ),
    m_gain( cfg.resolved_output_gain() ),
    m_raw( cfg.n_neurons ),
    m_sensed( cfg.n_neurons ),
    m_output_signal( cfg.n_neurons ) {
    if ( mask.size() != cfg.n_neurons ) {
        throw std::invalid_argument( "Machine: mask length differs from n_neurons" );
    }
    refresh_applied();
}

void Machine::refresh_applied() {
    WeightVector w = m_raw;
    if ( m_cfg.dac_bits ) {
        w = apply_dac( std::move( w ), *m_cfg.dac_bits, m_cfg.dac_range );
    }
    if ( m_cfg.mz_bias != 0.0 ) {
        w = apply_mz_bias( std::move( w ), m_cfg.mz_bias );
    }
    m_applied = std::move( w );
}

void Machine::set_weights( WeightVector w, double offset ) {
    if ( w.size() != m_cfg.n_neurons ) {
        throw std::invalid_argument( "Machine::set_weights: length mismatch" );
    }
    m_raw    = std::move( w );
    m_offset = m_cfg.output_offset ? offset : 0.0;
    refresh_applied();
}

double Machine::advance( double u ) {
    const auto x  = m_reservoir.advance( u );
    const auto pd = m_cfg.photodiode_fn;
    switch ( m_cfg.readout_mode ) {
    case ReadoutMode::IdealLinear:
        std::copy( x.begin(), x.end(), m_sensed.begin() );
        m_last_y = ideal_output( x, m_applied );
        break;
    case ReadoutMode::AnalogueLinear:
        std::copy( x.begin(), x.end(), m_sensed.begin() );
        m_last_y = m_gain * m_integrator.push( x, m_applied.values );
        break;
    case ReadoutMode::NonlinearReadout:
        for ( std::size_t i = 0; i < x.size(); ++i ) {
            m_sensed[i] = photodiode( pd, x[i] );
        }
        m_last_y = m_gain * m_integrator.push( x, m_applied.values );
        break;
    case ReadoutMode::NonlinearOutput:
        std::copy( x.begin(), x.end(), m_sensed.begin() );
        for ( std::size_t i = 0; i < x.size(); ++i ) {
            m_output_signal[i] = photodiode( pd, x[i] );
        }
        m_last_y = m_gain * m_integrator.push( m_output_signal, m_applied.values );
        break;
    }
    m_last_y += m_offset;
    ++m_steps;
    return m_last_y;
}

double Machine::learn( double d, double lambda ) {
    const double residual = d - m_last_y;
    m_raw = online_step( std::move( m_raw ), m_sensed, m_last_y, d, lambda );
    if ( m_cfg.output_offset ) {
        m_offset += lambda * residual;
    }
    if ( !( std::abs( m_offset ) <= kDivergenceLimit ) ) {
        throw DivergenceError( m_steps - 1, "output offset diverged" );
    }
    for ( const double w : m_raw.values ) {
        if ( !( std::abs( w ) <= kDivergenceLimit ) ) {
            throw DivergenceError( m_steps - 1, "readout weights diverged" );
        }
    }
    refresh_applied();
    return residual;
}

namespace
{

TrainOutcome drive_training( Machine & machine, const TaskData & task,
                             const TrainSchedule & sched ) {
    TrainOutcome out;
    out.log.sq_error.reserve( sched.train_len );
    out.log.lambda.reserve( sched.train_len );

    double lambda = sched.lambda0;
    for ( std::size_t n = 0; n < sched.train_len; ++n ) {
        if ( n > 0 && n % sched.update_rate == 0 ) {
            lambda = sched.lambda_min + sched.gamma * ( lambda - sched.lambda_min );
        }
        const double y        = machine.advance( task.input[n] );
        const double residual = task.target[n] - y;
        if ( n >= task.head_edge ) {
            machine.learn( task.target[n], lambda );
        }
        out.log.sq_error.push_back( residual * residual );
        out.log.lambda.push_back( lambda );
    }
    out.weights           = machine.weights();
    out.log.final_weights = out.weights;
    return out;
}

} // namespace

TrainOutcome train_online( const TaskData & task, const InputMask & mask,
                           const ReservoirConfig & cfg, const TrainSchedule & sched ) {
    validate_schedule( sched );
    if ( task.train_len < sched.train_len || task.size() < sched.train_len ) {
        throw std::invalid_argument( "train_online: task training split shorter than train_len" );
    }
    Machine machine( mask, cfg );
    return drive_training( machine, task, sched );
}

OnlineRun run_online( const TaskData & task, const InputMask & mask, const ReservoirConfig & cfg,
                      const TrainSchedule & sched ) {
    validate_schedule( sched );
    if ( task.train_len < sched.train_len
         || task.size() < task.train_len + task.test_len ) {
        throw std::invalid_argument( "run_online: task shorter than train_len + test_len" );
    }
    Machine   machine( mask, cfg );
    OnlineRun run;
    run.training = drive_training( machine, task, sched );

    for ( std::size_t n = sched.train_len; n < task.train_len; ++n ) {
        machine.advance( task.input[n] );
    }
    run.test_output.reserve( task.test_len );
    for ( std::size_t n = task.train_len; n < task.train_len + task.test_len; ++n ) {
        run.test_output.push_back( machine.advance( task.input[n] ) );
    }
    return run;
}

std::vector<double> run_frozen( const TaskData & task, const InputMask & mask,
                                const ReservoirConfig & cfg, const WeightVector & weights,
                                double offset ) {
    if ( task.size() < task.train_len + task.test_len ) {
        throw std::invalid_argument( "run_frozen: task shorter than train_len + test_len" );
    }
    Machine machine( mask, cfg );
    machine.set_weights( weights, offset );
    for ( std::size_t n = 0; n < task.train_len; ++n ) {
        machine.advance( task.input[n] );
    }
    std::vector<double> out;
    out.reserve( task.test_len );
    for ( std::size_t n = task.train_len; n < task.train_len + task.test_len; ++n ) {
        out.push_back( machine.advance( task.input[n] ) );
    }
    return out;
}

WeightVector ridge_solve( const Matrix & features, std::span<const double> target,
                          double ridge ) {
    if ( features.rows() == 0 || features.rows() != target.size() ) {
        throw std::invalid_argument( "ridge_solve: need one non-empty target per feature row" );
    }
    if ( !( ridge >= 0.0 ) ) {
        throw std::invalid_argument( "ridge_solve: ridge must be non-negative" );
    }
    using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
    const Eigen::Map<const RowMajor> x( features.data().data(),
                                        static_cast<Eigen::Index>( features.rows() ),
                                        static_cast<Eigen::Index>( features.cols() ) );
    const Eigen::Map<const Eigen::VectorXd> d( target.data(),
                                               static_cast<Eigen::Index>( target.size() ) );

    Eigen::MatrixXd normal = x.transpose() * x;
    normal.diagonal().array() += ridge;
    const Eigen::VectorXd rhs = x.transpose() * d;

    const Eigen::LDLT<Eigen::MatrixXd> ldlt( normal );
    const auto pivots = ldlt.vectorD().cwiseAbs();
    if ( ldlt.info() != Eigen::Success || !ldlt.isPositive()
         || !( pivots.minCoeff() > 1e-14 * pivots.maxCoeff() ) ) {
        throw NumericalError( "ridge_solve: normal matrix is singular; use ridge > 0" );
    }
    const Eigen::VectorXd w = ldlt.solve( rhs );
    return WeightVector( std::vector<double>( w.data(), w.data() + w.size() ) );
}

ReadoutFit train_offline_ridge( const TaskData & task, const InputMask & mask,
                                const ReservoirConfig & cfg, double ridge ) {
    validate_config( cfg );
    if ( task.train_len <= task.head_edge || task.size() < task.train_len ) {
        throw std::invalid_argument( "train_offline_ridge: empty training split" );
    }
    const auto pd_train = cfg.readout_mode == ReadoutMode::NonlinearReadout
                              ? cfg.photodiode_fn
                              : PhotodiodeFn::Identity;
    const std::size_t n    = cfg.n_neurons;
    const std::size_t cols = n + ( cfg.output_offset ? 1 : 0 );
    const bool        filtered = cfg.readout_mode != ReadoutMode::IdealLinear;

    const AnalogueIntegrator kernel( n, cfg.rc_ratio, cfg.kernel_sign );
    const double             scale = cfg.resolved_output_gain() * cfg.rc_ratio;
    std::vector<double>      charge( n, 0.0 );

    Reservoir reservoir( mask, cfg.feedback_gain, cfg.input_gain );
    Matrix    features( task.train_len - task.head_edge, cols );
    for ( std::size_t t = 0; t < task.train_len; ++t ) {
        const auto x = reservoir.advance( task.input[t] );
        for ( std::size_t i = 0; i < n; ++i ) {
            const double s = photodiode( pd_train, x[i] );
            charge[i] = filtered ? kernel.slot_factors()[i] * s + kernel.carry() * charge[i] : s;
        }
        if ( t < task.head_edge ) {
            continue;
        }
        auto row = features.row( t - task.head_edge );
        for ( std::size_t i = 0; i < n; ++i ) {
            row[i] = filtered ? scale * charge[i] : charge[i];
        }
        if ( cfg.output_offset ) {
            row[n] = 1.0;
        }
    }
    auto solved = ridge_solve( features,
                               std::span( task.target ).subspan( task.head_edge,
                                                                 task.train_len - task.head_edge ),
                               ridge );
    ReadoutFit fit;
    if ( cfg.output_offset ) {
        fit.offset = solved.values.back();
        solved.values.pop_back();
    }
    fit.weights = std::move( solved );
    return fit;
}

} // namespace oerc
