#pragma once

// Benchmark datasets and their metrics.
//
// Alignment: target[n] is what the readout should produce once input[n] has
// been injected, i.e. the row of the reservoir trace computed from input[n].

#include "oerc/core.hpp"

#include <array>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

namespace oerc
{

enum class TaskKind
{
    ChannelEq,
    Narma10
};

[[nodiscard]] std::string_view to_string( TaskKind kind ) noexcept;
[[nodiscard]] TaskKind         parse_task_kind( std::string_view text );

/// Raised when a dataset cannot be produced (NARMA10 divergence streak).
class GenerationError : public std::runtime_error
{
    using std::runtime_error::runtime_error;
};

/// Raised when a metric is undefined for its inputs (constant NMSE target).
class MetricError : public std::domain_error
{
    using std::domain_error::domain_error;
};

struct TaskData
{
    std::vector<double> input;
    std::vector<double> target;
    std::size_t         train_len = 0;
    std::size_t         test_len  = 0;
    TaskKind            kind      = TaskKind::ChannelEq;
    // Samples at the head of the sequence whose channel history is zero
    // padding; excluded from training updates and metrics.
    std::size_t         head_edge = 0;
    // NARMA10 sequences discarded by the divergence guard.
    std::size_t         regenerations = 0;

    [[nodiscard]] std::size_t size() const noexcept { return input.size(); }
    [[nodiscard]] std::span<const double> test_target() const {
        return std::span( target ).subspan( train_len, test_len );
    }
};

inline constexpr std::array<double, 4>  kChannelSymbols{ -3.0, -1.0, 1.0, 3.0 };
/// Taps for d(n+2), d(n+1), d(n), ..., d(n-7).
inline constexpr std::array<double, 10> kChannelTaps{ 0.08, -0.12, 1.0,  0.18, -0.1,
                                                      0.091, -0.05, 0.04, 0.03, 0.01 };
inline constexpr std::size_t            kChannelLead  = 2; // anticausal taps
inline constexpr std::size_t            kChannelEdge  = 10;

/// Symbols drawn uniformly from {-3, -1, 1, 3}.
[[nodiscard]] std::vector<double> channel_symbols( Rng & rng, std::size_t length );
/// Linear channel with memory: q(n) = sum_t tap_t d(n + 2 - t), zero outside.
[[nodiscard]] std::vector<double> channel_linear( std::span<const double> symbols );
/// Memoryless distortion u = q + 0.036 q^2 - 0.011 q^3.
[[nodiscard]] double channel_nonlinearity( double q ) noexcept;

/// Single-stream channel equalisation data; all samples are training
/// (train_len = length - 10, test_len = 0). Optional white Gaussian noise at
/// snr_db relative to the noiseless output power.
[[nodiscard]] TaskData gen_channel( Rng & rng, std::size_t length,
                                    std::optional<double> snr_db = std::nullopt );

/// NARMA10 targets for a given input: target[n] = d(n + 1) with
///   d(n+1) = 0.3 d(n) + 0.05 d(n) sum_{i=0..9} d(n-i) + 1.5 u(n-9) u(n) + 0.1
/// and zero history (d(m) = 0 for m <= 0, u(m) = 0 for m < 0).
[[nodiscard]] std::vector<double> narma10_targets( std::span<const double> u );

/// Draws u uniform on [0, 0.5] and regenerates the whole sequence from the
/// continuing stream while any |d| > 1.
[[nodiscard]] TaskData gen_narma10( Rng & rng, std::size_t length );

inline constexpr std::size_t kMaxNarmaRegenerations = 100;

/// Train/test dataset whose two segments come from independent streams, so
/// the training data does not depend on test_len. The channel sequence carries
/// kChannelEdge extra tail samples so every test target has real future
/// symbols.
[[nodiscard]] TaskData make_task( TaskKind kind, Rng & train_rng, Rng & test_rng,
                                  std::size_t train_len, std::size_t test_len,
                                  std::optional<double> snr_db = std::nullopt );

/// Nearest symbol of {-3,-1,1,3}; ties at the thresholds -2, 0, 2 go up.
[[nodiscard]] double quantize_symbol( double y ) noexcept;

/// Fraction of misclassified symbols after the first washout samples.
[[nodiscard]] double ser( std::span<const double> y, std::span<const double> d,
                          std::size_t washout = 0 );

/// <(y - d)^2> / <(d - <d>)^2> after the first washout samples.
[[nodiscard]] double nmse( std::span<const double> y, std::span<const double> d,
                           std::size_t washout = 0 );

/// Two-column CSV with header u,d.
void     write_task_csv( std::ostream & out, const TaskData & task );
[[nodiscard]] TaskData read_task_csv( std::istream & in, TaskKind kind, std::size_t train_len,
                                      std::size_t test_len );

} // namespace oerc
