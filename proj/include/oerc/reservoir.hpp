#pragma once

// Ring-topology delay reservoir with sine nonlinearity.
//
//   x_0(n+1) = sin(alpha * x_{N-1}(n-1) + beta * M_0 * u(n))
//   x_i(n+1) = sin(alpha * x_{i-1}(n)   + beta * M_i * u(n)),  i >= 1
//
// Neuron 0 is fed by the last neuron one round trip earlier than the others
// (desynchronised delay loop). All histories start at zero.

#include "oerc/core.hpp"

#include <iosfwd>
#include <span>
#include <vector>

namespace oerc
{

/// States after each injected input: row n holds the neuron values produced
/// by u(n), shape (timesteps x N).
struct ReservoirTrace
{
    Matrix states;

    [[nodiscard]] std::size_t timesteps() const noexcept { return states.rows(); }
    [[nodiscard]] std::size_t n_neurons() const noexcept { return states.cols(); }
};

/// One update of the ring. prev_last_lagged is x_{N-1} from the step before
/// prev_states.
[[nodiscard]] std::vector<double> step( std::span<const double> prev_states,
                                        double prev_last_lagged, double u,
                                        const InputMask & mask, double alpha,
                                        double beta );

/// Streaming form of step(); keeps only the current row and the lagged tail.
class Reservoir
{
  public:
    Reservoir( const InputMask & mask, double alpha, double beta );

    /// Injects u and returns the new state row (valid until the next call).
    std::span<const double> advance( double u );

    [[nodiscard]] std::span<const double> states() const noexcept { return m_states; }
    [[nodiscard]] std::size_t size() const noexcept { return m_states.size(); }

  private:
    std::vector<double> m_mask;
    std::vector<double> m_states;
    std::vector<double> m_next;
    double              m_alpha;
    double              m_beta;
    double              m_last_lagged = 0.0;
};

[[nodiscard]] ReservoirTrace run_reservoir( std::span<const double> u_seq,
                                            const InputMask & mask,
                                            const ReservoirConfig & cfg );

/// CSV with header n,x_0,...,x_{N-1}. Debug output, not a stable format.
void write_trace_csv( std::ostream & out, const ReservoirTrace & trace );

} // namespace oerc
