#pragma once

// Output layer models: the ideal digital dot product, the RC-filter analogue
// summation with its exponential kernel, the saturable photodiode responses
// and the weight-path imperfections (DAC quantization, modulator bias).

#include "oerc/core.hpp"

#include <cmath>
#include <span>
#include <vector>

namespace oerc
{

struct WeightVector
{
    std::vector<double> values;

    WeightVector() = default;
    explicit WeightVector( std::size_t n, double fill = 0.0 ) : values( n, fill ) {}
    explicit WeightVector( std::vector<double> v ) : values( std::move( v ) ) {}

    [[nodiscard]] std::size_t size() const noexcept { return values.size(); }
    [[nodiscard]] bool        all_finite() const noexcept;
    bool operator==( const WeightVector & ) const = default;
};

/// g_lg(x) = 2 / (1 + e^{-2x}) - 1
[[nodiscard]] inline double logistic_response( double x ) noexcept {
    return 2.0 / ( 1.0 + std::exp( -2.0 * x ) ) - 1.0;
}

/// g_ht(x) = 0.6 tanh(1.8 x)
[[nodiscard]] inline double hyptan_response( double x ) noexcept {
    return 0.6 * std::tanh( 1.8 * x );
}

[[nodiscard]] inline double photodiode( PhotodiodeFn fn, double x ) noexcept {
    switch ( fn ) {
    case PhotodiodeFn::Logistic: return logistic_response( x );
    case PhotodiodeFn::HypTan: return hyptan_response( x );
    case PhotodiodeFn::Identity: break;
    }
    return x;
}

/// Elementwise photodiode response.
[[nodiscard]] std::vector<double> sense_states( std::span<const double> states,
                                                PhotodiodeFn fn );

/// sum_i w_i x_i
[[nodiscard]] double ideal_output( std::span<const double> states, const WeightVector & w );

/// Uniform mid-tread quantizer, step 2R / 2^bits, clamped to [-R, R].
[[nodiscard]] WeightVector apply_dac( WeightVector w, unsigned bits, double range );
[[nodiscard]] double       quantize( double value, unsigned bits, double range );

/// Adds the modulator bias to every effective weight.
[[nodiscard]] WeightVector apply_mz_bias( WeightVector w, double bias );

/// Attenuation factors of the RC kernel for a ring of N neurons. Neuron j
/// (0-based) seen k round trips ago has elapsed time theta * (N - 1 - j + N k),
/// so its factor is exp(-rho * (N - 1 - j + N k)).
class KernelTable
{
  public:
    KernelTable( std::size_t n_neurons, double rho, std::size_t depth,
                 KernelSign sign = KernelSign::Decaying );

    /// Smallest K with exp(-rho N K) < tolerance.
    [[nodiscard]] static std::size_t default_depth( std::size_t n_neurons, double rho,
                                                    double tolerance = 1e-12 );

    /// Relative weight of the dropped tail k > depth:
    /// exp(-rho N depth) / (1 - exp(-rho N)).
    [[nodiscard]] double truncation_bound() const noexcept;

    [[nodiscard]] double factor( std::size_t neuron, std::size_t lag ) const noexcept {
        return m_factors[lag * m_n + neuron];
    }
    [[nodiscard]] std::size_t depth() const noexcept { return m_depth; }
    [[nodiscard]] std::size_t n_neurons() const noexcept { return m_n; }
    [[nodiscard]] double      rho() const noexcept { return m_rho; }
    [[nodiscard]] KernelSign  sign() const noexcept { return m_sign; }

  private:
    std::size_t         m_n;
    double              m_rho;
    std::size_t         m_depth;
    KernelSign          m_sign;
    std::vector<double> m_factors; // (depth + 1) x N
};

/// Ring buffer of the last depth + 1 applied weight vectors. at(k) is the
/// vector applied k steps ago.
class WeightHistory
{
  public:
    WeightHistory( std::size_t n_neurons, std::size_t depth );

    void push( const WeightVector & w );

    [[nodiscard]] std::span<const double> at( std::size_t lag ) const;
    [[nodiscard]] std::size_t capacity() const noexcept { return m_rows.rows(); }
    /// Number of vectors pushed so far, saturating at capacity().
    [[nodiscard]] std::size_t filled() const noexcept { return m_filled; }

  private:
    Matrix      m_rows;
    std::size_t m_head   = 0;
    std::size_t m_filled = 0;
};

/// Explicit double sum of the analogue output:
///   rho * sum_j sum_k w_j(n-k) s_j(n-k) factor(j, k)
/// window row k holds the states of lag k. Rows beyond the window or the
/// filled part of the history contribute nothing (zero initial condition).
/// s = g(x) for pd_output != Identity.
[[nodiscard]] double analogue_output( const Matrix & window, const WeightHistory & history,
                                      const KernelTable & kernel, double rho,
                                      PhotodiodeFn pd_output = PhotodiodeFn::Identity );

/// Recursive form of analogue_output with unbounded memory. The capacitor
/// voltage obeys Y(n) = c(n) + exp(-rho N) Y(n-1), where c(n) is the
/// kernel-weighted contribution of the current round trip.
class AnalogueIntegrator
{
  public:
    AnalogueIntegrator( std::size_t n_neurons, double rho,
                        KernelSign sign = KernelSign::Decaying );

    /// Feeds one round trip of sensed states and applied weights; returns y(n).
    double push( std::span<const double> signal, std::span<const double> weights );

    void reset() noexcept { m_charge = 0.0; }
    [[nodiscard]] double output() const noexcept { return m_rho * m_charge; }

    [[nodiscard]] std::span<const double> slot_factors() const noexcept { return m_slot_factors; }
    [[nodiscard]] double carry() const noexcept { return m_carry; }

  private:
    std::vector<double> m_slot_factors;
    double              m_rho;
    double              m_carry; // exp(-rho N), or 0 for the single-trip kernel
    double              m_charge = 0.0;
};

} // namespace oerc
