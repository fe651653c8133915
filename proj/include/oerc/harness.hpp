#pragma once

// Experiment orchestration: replicated runs over input masks, parameter
// sweeps, the readout scenario table, flat key = value configuration and CSV
// output.

#include "oerc/core.hpp"
#include "oerc/tasks.hpp"
#include "oerc/trainer.hpp"

#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace oerc
{

struct ExperimentSpec
{
    ReservoirConfig       base;
    TrainSchedule         sched;
    TaskKind              task     = TaskKind::ChannelEq;
    std::size_t           test_len = 100000;
    std::optional<double> snr_db;
    // Swept parameter names with their grids; every value is a config string.
    std::vector<std::pair<std::string, std::vector<std::string>>> sweep;
    std::size_t           n_masks    = 10;
    std::size_t           first_mask = 0;
    unsigned              threads    = 0; // 0: one per hardware thread
    std::string           output;
};

/// Task defaults: alpha, beta, rho and the test length.
[[nodiscard]] ExperimentSpec default_spec( TaskKind kind );

/// Shorter train and test splits for smoke runs.
void apply_quick_profile( ExperimentSpec & spec );

/// Assigns one configuration key. Throws ConfigError for unknown keys or
/// unparsable values.
void set_param( ExperimentSpec & spec, const std::string & key, const std::string & value );

/// Keys accepted by set_param, each with a one-line description.
[[nodiscard]] const std::vector<std::pair<std::string, std::string>> & config_keys();

/// Builds a spec from ordered key/value settings. "task" and "quick" are
/// applied first so that task defaults never override explicit values.
[[nodiscard]] ExperimentSpec build_spec(
    const std::vector<std::pair<std::string, std::string>> & settings );

/// Parses "key = value" lines; '#' starts a comment.
[[nodiscard]] std::vector<std::pair<std::string, std::string>> parse_config( std::istream & in );

/// Grid syntax: "a,b,c", "lin:lo:hi:step" or "log:lo:hi:per_decade".
[[nodiscard]] std::vector<std::string> parse_grid( const std::string & text );
/// Grid used when a parameter is swept without explicit values.
[[nodiscard]] std::vector<std::string> default_grid( const std::string & param );

struct RunInputs
{
    InputMask mask;
    TaskData  data;
};

/// Mask and dataset of one replica, drawn from sub-streams of (cfg.seed,
/// mask_id) so that all grid points share the same masks.
[[nodiscard]] RunInputs make_run_inputs( const ReservoirConfig & cfg, const TrainSchedule & sched,
                                         TaskKind task, std::size_t test_len, std::size_t mask_id,
                                         std::optional<double> snr_db = std::nullopt );

struct RunResult
{
    ReservoirConfig cfg;
    TrainSchedule   sched;
    TaskKind        task     = TaskKind::ChannelEq;
    std::size_t     test_len = 0;
    std::size_t     mask_id  = 0;
    std::string     metric; // "SER" or "NMSE"
    double          value             = 0.0;
    double          final_lambda      = 0.0;
    double          final_train_error = 0.0; // mean (d - y)^2 over the last 1000 steps
    double          wall_seconds      = 0.0;
    std::string     error;                   // non-empty when the run failed

    [[nodiscard]] bool ok() const noexcept { return error.empty(); }
};

/// Online training and frozen test of one configuration on one mask. The mask
/// and both data segments come from sub-streams of (cfg.seed, mask_id).
[[nodiscard]] RunResult run_once( const ReservoirConfig & cfg, const TrainSchedule & sched,
                                  TaskKind task, std::size_t test_len, std::size_t mask_id,
                                  std::optional<double> snr_db = std::nullopt );

/// As run_once, but the readout is fitted offline by ridge regression.
[[nodiscard]] RunResult run_offline( const ReservoirConfig & cfg, const TrainSchedule & sched,
                                     TaskKind task, std::size_t test_len, std::size_t mask_id,
                                     double ridge = kDefaultRidge,
                                     std::optional<double> snr_db = std::nullopt );

struct AggregateRow
{
    std::vector<std::pair<std::string, std::string>> point; // swept name, value
    double      mean     = 0.0;
    double      std      = 0.0; // sample standard deviation over masks
    std::size_t n        = 0;   // successful runs
    std::size_t failures = 0;
};

struct SweepResult
{
    std::vector<RunResult>    runs; // grid order, then mask order
    std::vector<AggregateRow> rows; // grid order
};

/// Cartesian product of the grids times the masks. Output order does not
/// depend on the number of threads.
[[nodiscard]] SweepResult run_sweep( const ExperimentSpec & spec );

[[nodiscard]] AggregateRow aggregate( std::span<const RunResult> runs );

struct Table1Cell
{
    TaskKind     task;
    ReadoutMode  mode;
    PhotodiodeFn pd;
    AggregateRow stats;
};

/// The ten readout scenarios, each at the task defaults.
[[nodiscard]] std::vector<Table1Cell> reproduce_table1( std::size_t n_masks, bool quick = false,
                                                        std::uint64_t seed = 42,
                                                        unsigned threads = 0 );

/// Sweeps behind the beta, alpha, rho, bias and DAC resolution figures for
/// both tasks. Keys are file stems such as "rho_channel".
[[nodiscard]] std::map<std::string, SweepResult> figure_sweeps( std::size_t n_masks, bool quick,
                                                                std::uint64_t seed = 42,
                                                                unsigned threads = 0 );

inline constexpr const char * kRunCsvHeader =
    "task,mask_id,seed,alpha,beta,rho,bias,dac_bits,readout_mode,pd_fn,metric,value";
inline constexpr const char * kAggregateCsvHeader = "param,value,mean,std,n";

void write_runs_csv( std::ostream & out, std::span<const RunResult> runs );
void write_aggregate_csv( std::ostream & out, std::span<const AggregateRow> rows );
/// key=value provenance: the full spec, failures per row and wall times.
void write_meta( std::ostream & out, const ExperimentSpec & spec, const SweepResult & result );
void write_table1( std::ostream & out, std::span<const Table1Cell> cells );

/// Shortest round-trip decimal form.
[[nodiscard]] std::string format_number( double v );

} // namespace oerc
