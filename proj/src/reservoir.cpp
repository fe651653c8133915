#include "oerc/reservoir.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <stdexcept>

namespace oerc
{

std::vector<double> step( std::span<const double> prev_states, double prev_last_lagged,
                          double u, const InputMask & mask, double alpha, double beta ) {
    const auto n = prev_states.size();
    if ( n == 0 || mask.size() != n ) {
        throw std::invalid_argument( "step: state and mask lengths differ" );
    }
    std::vector<double> next( n );
    next[0] = std::sin( alpha * prev_last_lagged + beta * mask.values[0] * u );
    for ( std::size_t i = 1; i < n; ++i ) {
        next[i] = std::sin( alpha * prev_states[i - 1] + beta * mask.values[i] * u );
    }
    return next;
}

Reservoir::Reservoir( const InputMask & mask, double alpha, double beta ) :
    m_mask( mask.values ),
    m_states( mask.size(), 0.0 ),
    m_next( mask.size(), 0.0 ),
    m_alpha( alpha ),
    m_beta( beta ) {
    if ( m_mask.empty() ) {
        throw std::invalid_argument( "Reservoir: empty mask" );
    }
}

std::span<const double> Reservoir::advance( double u ) {
    const auto n = m_states.size();
    const double drive = m_beta * u;
    m_next[0] = std::sin( m_alpha * m_last_lagged + drive * m_mask[0] );
    for ( std::size_t i = 1; i < n; ++i ) {
        m_next[i] = std::sin( m_alpha * m_states[i - 1] + drive * m_mask[i] );
    }
    m_last_lagged = m_states[n - 1];
    m_states.swap( m_next );
    return m_states;
}

ReservoirTrace run_reservoir( std::span<const double> u_seq, const InputMask & mask,
                              const ReservoirConfig & cfg ) {
    if ( u_seq.empty() ) {
        throw std::invalid_argument( "run_reservoir: empty input sequence" );
    }
    if ( mask.size() != cfg.n_neurons ) {
        throw std::invalid_argument( "run_reservoir: mask length differs from n_neurons" );
    }
    Reservoir      reservoir( mask, cfg.feedback_gain, cfg.input_gain );
    ReservoirTrace trace{ Matrix( u_seq.size(), cfg.n_neurons ) };
    for ( std::size_t n = 0; n < u_seq.size(); ++n ) {
        const auto row = reservoir.advance( u_seq[n] );
        std::copy( row.begin(), row.end(), trace.states.row( n ).begin() );
    }
    return trace;
}

void write_trace_csv( std::ostream & out, const ReservoirTrace & trace ) {
    out << "n";
    for ( std::size_t i = 0; i < trace.n_neurons(); ++i ) {
        out << ",x_" << i;
    }
    out << '\n' << std::setprecision( 17 );
    for ( std::size_t n = 0; n < trace.timesteps(); ++n ) {
        out << n;
        for ( const double x : trace.states.row( n ) ) {
            out << ',' << x;
        }
        out << '\n';
    }
}

} // namespace oerc
