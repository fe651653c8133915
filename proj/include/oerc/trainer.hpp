#pragma once

// Online gradient-descent training of the readout weights, the decaying step
// size schedule, and an offline ridge-regression baseline.

#include "oerc/core.hpp"
#include "oerc/readout.hpp"
#include "oerc/reservoir.hpp"
#include "oerc/tasks.hpp"

#include <iosfwd>
#include <span>
#include <stdexcept>
#include <vector>

namespace oerc
{

/// Weights left the finite range during training.
class DivergenceError : public std::runtime_error
{
  public:
    DivergenceError( std::size_t step, const std::string & what ) :
        std::runtime_error( what + " at step " + std::to_string( step ) ), m_step( step ) {}

    [[nodiscard]] std::size_t step() const noexcept { return m_step; }

  private:
    std::size_t m_step;
};

/// Non-finite output or target fed to an update.
class TrainingError : public std::runtime_error
{
    using std::runtime_error::runtime_error;
};

/// Linear solve failed (singular normal matrix).
class NumericalError : public std::runtime_error
{
    using std::runtime_error::runtime_error;
};

struct TrainSchedule
{
    double      lambda0     = 0.4;
    double      lambda_min  = 0.0;
    double      gamma       = 0.999;
    std::size_t update_rate = 10;    // k: steps per lambda decay
    std::size_t train_len   = 83000;

    bool operator==( const TrainSchedule & ) const = default;
};

void validate_schedule( const TrainSchedule & sched );

/// Step size in force at step n: lambda_min + gamma^floor(n/k) (lambda0 - lambda_min).
[[nodiscard]] double lambda_at( std::size_t n, const TrainSchedule & sched );

/// w_i + lambda (d - y) sensed_i
[[nodiscard]] WeightVector online_step( WeightVector w, std::span<const double> sensed,
                                        double y, double d, double lambda );

inline constexpr double kDivergenceLimit = 1e6;

struct TrainLog
{
    std::vector<double> sq_error; // (d - y)^2 per step
    std::vector<double> lambda;   // step size used at each step
    WeightVector        final_weights;

    /// CSV with header n,lambda,sq_error.
    void write_csv( std::ostream & out ) const;
};

/// Reservoir plus readout signal path for one configuration. Raw weights are
/// stored at full precision; each output sees them after DAC quantization and
/// modulator bias. For AnalogueLinear the photodiode selector is not used.
class Machine
{
  public:
    Machine( const InputMask & mask, const ReservoirConfig & cfg );

    /// Injects u and returns y(n) computed with the currently applied weights.
    double advance( double u );

    /// Gradient step towards d using the last sensed states and output.
    /// Returns the residual d - y.
    double learn( double d, double lambda );

    void set_weights( WeightVector w, double offset = 0.0 );

    [[nodiscard]] const WeightVector & weights() const noexcept { return m_raw; }
    [[nodiscard]] const WeightVector & applied_weights() const noexcept { return m_applied; }
    [[nodiscard]] double offset() const noexcept { return m_offset; }
    [[nodiscard]] std::span<const double> states() const noexcept { return m_reservoir.states(); }
    [[nodiscard]] std::span<const double> sensed() const noexcept { return m_sensed; }
    [[nodiscard]] double last_output() const noexcept { return m_last_y; }
    [[nodiscard]] std::size_t steps() const noexcept { return m_steps; }

  private:
    void refresh_applied();

    ReservoirConfig     m_cfg;
    Reservoir           m_reservoir;
    AnalogueIntegrator  m_integrator;
    double              m_gain;
    WeightVector        m_raw;
    WeightVector        m_applied;
    std::vector<double> m_sensed;
    std::vector<double> m_output_signal;
    double              m_offset = 0.0; // DC level on the output, not routed through the DAC
    double              m_last_y = 0.0;
    std::size_t         m_steps  = 0;
};

struct TrainOutcome
{
    WeightVector weights;
    TrainLog     log;
};

/// Trains from zero weights over the first sched.train_len samples. Samples
/// inside task.head_edge drive the reservoir but do not update the weights.
[[nodiscard]] TrainOutcome train_online( const TaskData & task, const InputMask & mask,
                                         const ReservoirConfig & cfg,
                                         const TrainSchedule & sched );

struct OnlineRun
{
    TrainOutcome        training;
    std::vector<double> test_output; // y over the test split, weights frozen
};

/// Trains online, freezes the weights and keeps the same machine running
/// through the test split.
[[nodiscard]] OnlineRun run_online( const TaskData & task, const InputMask & mask,
                                    const ReservoirConfig & cfg, const TrainSchedule & sched );

/// Runs the machine with fixed weights over the whole sequence and returns the
/// outputs over the test split.
[[nodiscard]] std::vector<double> run_frozen( const TaskData & task, const InputMask & mask,
                                              const ReservoirConfig & cfg,
                                              const WeightVector & weights, double offset = 0.0 );

/// Solves (X^T X + ridge I) w = X^T d.
[[nodiscard]] WeightVector ridge_solve( const Matrix & features, std::span<const double> target,
                                        double ridge );

inline constexpr double kDefaultRidge = 1e-6;

struct ReadoutFit
{
    WeightVector weights;
    double       offset = 0.0;
};

/// Offline baseline. Regresses the targets on the recorded states of the
/// training split pushed through the linear model of the configured readout:
/// the states themselves for the ideal readout, their RC-filtered and
/// amplified versions otherwise. Photodiode saturation on the output side is
/// not part of the model. An offset column is added when cfg.output_offset.
[[nodiscard]] ReadoutFit train_offline_ridge( const TaskData & task, const InputMask & mask,
                                                const ReservoirConfig & cfg,
                                                double ridge = kDefaultRidge );

} // namespace oerc
