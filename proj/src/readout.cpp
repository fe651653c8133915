#include "oerc/readout.hpp"

#include <algorithm>
#include <stdexcept>

namespace oerc
{

bool WeightVector::all_finite() const noexcept {
    return std::all_of( values.begin(), values.end(),
                        []( double v ) { return std::isfinite( v ); } );
}

std::vector<double> sense_states( std::span<const double> states, PhotodiodeFn fn ) {
    std::vector<double> out( states.size() );
    std::transform( states.begin(), states.end(), out.begin(),
                    [fn]( double x ) { return photodiode( fn, x ); } );
    return out;
}

double ideal_output( std::span<const double> states, const WeightVector & w ) {
    if ( states.size() != w.size() ) {
        throw std::invalid_argument( "ideal_output: state and weight lengths differ" );
    }
    double y = 0.0;
    for ( std::size_t i = 0; i < states.size(); ++i ) {
        y += w.values[i] * states[i];
    }
    return y;
}

double quantize( double value, unsigned bits, double range ) {
    const double step = 2.0 * range / std::ldexp( 1.0, static_cast<int>( bits ) );
    return std::clamp( step * std::round( value / step ), -range, range );
}

WeightVector apply_dac( WeightVector w, unsigned bits, double range ) {
    if ( bits < 1 || !( range > 0.0 ) ) {
        throw std::invalid_argument( "apply_dac: need bits >= 1 and range > 0" );
    }
    for ( auto & v : w.values ) {
        v = quantize( v, bits, range );
    }
    return w;
}

WeightVector apply_mz_bias( WeightVector w, double bias ) {
    for ( auto & v : w.values ) {
        v += bias;
    }
    return w;
}

KernelTable::KernelTable( std::size_t n_neurons, double rho, std::size_t depth,
                          KernelSign sign ) :
    m_n( n_neurons ), m_rho( rho ), m_depth( depth ), m_sign( sign ) {
    if ( n_neurons == 0 || !( rho > 0.0 ) ) {
        throw std::invalid_argument( "KernelTable: need N >= 1 and rho > 0" );
    }
    const double n      = static_cast<double>( n_neurons );
    const double k_sign = sign == KernelSign::Decaying ? 1.0 : -1.0;
    m_factors.resize( ( depth + 1 ) * n_neurons );
    for ( std::size_t k = 0; k <= depth; ++k ) {
        for ( std::size_t j = 0; j < n_neurons; ++j ) {
            const double elapsed = n - 1.0 - static_cast<double>( j )
                                   + k_sign * n * static_cast<double>( k );
            m_factors[k * n_neurons + j] = std::exp( -rho * elapsed );
        }
    }
}

std::size_t KernelTable::default_depth( std::size_t n_neurons, double rho, double tolerance ) {
    const double per_trip = rho * static_cast<double>( n_neurons );
    auto depth = static_cast<std::size_t>( std::ceil( -std::log( tolerance ) / per_trip ) );
    while ( std::exp( -per_trip * static_cast<double>( depth ) ) >= tolerance ) {
        ++depth;
    }
    while ( depth > 1 && std::exp( -per_trip * static_cast<double>( depth - 1 ) ) < tolerance ) {
        --depth;
    }
    return std::max<std::size_t>( depth, 1 );
}

double KernelTable::truncation_bound() const noexcept {
    const double per_trip = m_rho * static_cast<double>( m_n );
    return std::exp( -per_trip * static_cast<double>( m_depth ) ) / ( 1.0 - std::exp( -per_trip ) );
}

WeightHistory::WeightHistory( std::size_t n_neurons, std::size_t depth ) :
    m_rows( depth + 1, n_neurons ) {}

void WeightHistory::push( const WeightVector & w ) {
    if ( w.size() != m_rows.cols() ) {
        throw std::invalid_argument( "WeightHistory: weight length mismatch" );
    }
    m_head = ( m_head + m_rows.rows() - 1 ) % m_rows.rows();
    std::copy( w.values.begin(), w.values.end(), m_rows.row( m_head ).begin() );
    m_filled = std::min( m_filled + 1, m_rows.rows() );
}

std::span<const double> WeightHistory::at( std::size_t lag ) const {
    if ( lag >= m_rows.rows() ) {
        throw std::out_of_range( "WeightHistory: lag beyond capacity" );
    }
    return m_rows.row( ( m_head + lag ) % m_rows.rows() );
}

double analogue_output( const Matrix & window, const WeightHistory & history,
                        const KernelTable & kernel, double rho, PhotodiodeFn pd_output ) {
    const auto n = kernel.n_neurons();
    if ( window.cols() != n || window.rows() == 0 || window.rows() > kernel.depth() + 1
         || history.capacity() != window.rows() ) {
        throw std::invalid_argument( "analogue_output: window, history and kernel misaligned" );
    }
    const auto lags = std::min( window.rows(), history.filled() );
    double     sum  = 0.0;
    for ( std::size_t k = 0; k < lags; ++k ) {
        const auto states  = window.row( k );
        const auto weights = history.at( k );
        for ( std::size_t j = 0; j < n; ++j ) {
            sum += weights[j] * photodiode( pd_output, states[j] ) * kernel.factor( j, k );
        }
    }
    return rho * sum;
}

AnalogueIntegrator::AnalogueIntegrator( std::size_t n_neurons, double rho, KernelSign sign ) :
    m_slot_factors( n_neurons ), m_rho( rho ) {
    if ( n_neurons == 0 || !( rho > 0.0 ) ) {
        throw std::invalid_argument( "AnalogueIntegrator: need N >= 1 and rho > 0" );
    }
    for ( std::size_t j = 0; j < n_neurons; ++j ) {
        m_slot_factors[j] = std::exp( -rho * static_cast<double>( n_neurons - 1 - j ) );
    }
    m_carry = sign == KernelSign::Decaying
                  ? std::exp( -rho * static_cast<double>( n_neurons ) )
                  : 0.0;
}

double AnalogueIntegrator::push( std::span<const double> signal,
                                 std::span<const double> weights ) {
    const auto n = m_slot_factors.size();
    if ( signal.size() != n || weights.size() != n ) {
        throw std::invalid_argument( "AnalogueIntegrator: length mismatch" );
    }
    double trip = 0.0;
    for ( std::size_t j = 0; j < n; ++j ) {
        trip += weights[j] * signal[j] * m_slot_factors[j];
    }
    m_charge = trip + m_carry * m_charge;
    return m_rho * m_charge;
}

} // namespace oerc
