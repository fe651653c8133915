#pragma once

// Shared domain types for the opto-electronic reservoir simulator: machine
// configuration, the seeded random stream, dense matrices and the input mask.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace oerc
{

/// Raised when a configuration or argument violates an invariant. The
/// offending field is available through field().
class ConfigError : public std::invalid_argument
{
  public:
    ConfigError( std::string field, const std::string & what ) :
        std::invalid_argument( field + ": " + what ), m_field( std::move( field ) ) {}

    [[nodiscard]] const std::string & field() const noexcept { return m_field; }

  private:
    std::string m_field;
};

enum class ReadoutMode
{
    IdealLinear,      // y = sum w_i x_i, digital readout
    AnalogueLinear,   // RC-filter integration of the weighted states
    NonlinearReadout, // trainer sees g(x), output integrates x
    NonlinearOutput   // trainer sees x, output integrates g(x)
};

enum class PhotodiodeFn
{
    Identity,
    Logistic,
    HypTan
};

/// Sign of the exponent in the readout kernel. Decaying is the RC impulse
/// response; Growing is the literal e^{-rho(N-i-Nk)} variant, which only
/// agrees with Decaying on the k = 0 slice and is therefore evaluated with a
/// single round trip of memory.
enum class KernelSign
{
    Decaying,
    Growing
};

[[nodiscard]] std::string_view to_string( ReadoutMode mode ) noexcept;
[[nodiscard]] std::string_view to_string( PhotodiodeFn fn ) noexcept;
[[nodiscard]] std::string_view to_string( KernelSign sign ) noexcept;
[[nodiscard]] ReadoutMode      parse_readout_mode( std::string_view text );
[[nodiscard]] PhotodiodeFn     parse_photodiode_fn( std::string_view text );
[[nodiscard]] KernelSign       parse_kernel_sign( std::string_view text );

struct ReservoirConfig
{
    std::size_t             n_neurons     = 50;
    double                  feedback_gain = 0.8; // alpha
    double                  input_gain    = 0.2; // beta
    double                  rc_ratio      = 0.03; // rho = theta / tau
    double                  mz_bias       = 0.0;
    std::optional<unsigned> dac_bits;             // nullopt: unquantized
    double                  dac_range     = 48.0; // covers the trained weight envelope
    ReadoutMode             readout_mode  = ReadoutMode::AnalogueLinear;
    PhotodiodeFn            photodiode_fn = PhotodiodeFn::Identity;
    KernelSign              kernel_sign   = KernelSign::Decaying;
    // Gain of the amplifier between the RC filter and the recorded output.
    // Unset selects the round-trip normalisation, under which one round trip
    // of unit states and unit weights charges the filter to exactly 1.
    std::optional<double>   output_gain;
    // Trainable constant offset added to the recorded output, updated with a
    // unit input. The sine ring produces odd features only, so without it
    // the readout cannot represent even parts of the target map.
    bool                    output_offset = true;
    std::uint64_t           seed          = 42;
    std::size_t             washout       = 100;
    // Physical round trip time in seconds. Metadata only.
    double                  round_trip_time = 7.94e-6;

    [[nodiscard]] double resolved_output_gain() const noexcept;

    bool operator==( const ReservoirConfig & ) const = default;
};

/// Returns cfg unchanged when every invariant holds, otherwise throws a
/// ConfigError naming the first offending field.
const ReservoirConfig & validate_config( const ReservoirConfig & cfg );

/// Deterministic 64-bit stream. Sub-streams are derived from the root seed
/// and a purpose tag, never from the current position, so consuming one
/// stream cannot perturb another.
class Rng
{
  public:
    explicit Rng( std::uint64_t seed );

    [[nodiscard]] Rng derive( std::string_view purpose, std::uint64_t index = 0 ) const;

    std::uint64_t next_u64() { return m_engine(); }

    /// Uniform on the closed interval [0, 1] with 53-bit resolution.
    double uniform_closed();
    /// Uniform on [0, 1).
    double uniform01();
    double uniform( double lo, double hi ) { return lo + ( hi - lo ) * uniform_closed(); }
    /// Uniform integer in [0, 2^bits).
    std::uint64_t bits( unsigned count ) { return count == 0 ? 0 : next_u64() >> ( 64 - count ); }
    /// Standard normal variate (Box-Muller, platform independent).
    double normal();

    [[nodiscard]] std::uint64_t seed() const noexcept { return m_seed; }

  private:
    Rng( std::uint64_t seed, std::uint64_t tag, std::uint64_t index );

    std::uint64_t   m_seed;
    std::mt19937_64 m_engine;
    std::optional<double> m_spare_normal;
};

/// Row-major dense matrix of doubles.
class Matrix
{
  public:
    Matrix() = default;
    Matrix( std::size_t rows, std::size_t cols, double fill = 0.0 ) :
        m_rows( rows ), m_cols( cols ), m_data( rows * cols, fill ) {}

    [[nodiscard]] std::size_t rows() const noexcept { return m_rows; }
    [[nodiscard]] std::size_t cols() const noexcept { return m_cols; }

    [[nodiscard]] std::span<double> row( std::size_t r ) {
        return { m_data.data() + r * m_cols, m_cols };
    }
    [[nodiscard]] std::span<const double> row( std::size_t r ) const {
        return { m_data.data() + r * m_cols, m_cols };
    }
    double & operator()( std::size_t r, std::size_t c ) { return m_data[r * m_cols + c]; }
    double   operator()( std::size_t r, std::size_t c ) const { return m_data[r * m_cols + c]; }

    [[nodiscard]] std::span<const double> data() const noexcept { return m_data; }

    bool operator==( const Matrix & ) const = default;

  private:
    std::size_t         m_rows = 0;
    std::size_t         m_cols = 0;
    std::vector<double> m_data;
};

struct InputMask
{
    std::vector<double> values;

    [[nodiscard]] std::size_t size() const noexcept { return values.size(); }
    bool operator==( const InputMask & ) const = default;
};

/// n values drawn i.i.d. uniform on [-1, 1].
[[nodiscard]] InputMask make_mask( Rng & rng, std::size_t n );

} // namespace oerc
