#include "oerc/core.hpp"

#include <array>
#include <cctype>
#include <cmath>
#include <numbers>

namespace oerc
{

namespace
{

// FNV-1a; std::hash is not stable across standard libraries.
constexpr std::uint64_t fnv1a( std::string_view text ) noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for ( const char c : text ) {
        h ^= static_cast<unsigned char>( c );
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string lower( std::string_view text ) {
    std::string out( text );
    for ( auto & c : out ) {
        c = static_cast<char>( std::tolower( static_cast<unsigned char>( c ) ) );
    }
    return out;
}

} // namespace

std::string_view to_string( ReadoutMode mode ) noexcept {
    switch ( mode ) {
    case ReadoutMode::IdealLinear: return "ideal";
    case ReadoutMode::AnalogueLinear: return "analogue";
    case ReadoutMode::NonlinearReadout: return "nonlinear-readout";
    case ReadoutMode::NonlinearOutput: return "nonlinear-output";
    }
    return "?";
}

std::string_view to_string( PhotodiodeFn fn ) noexcept {
    switch ( fn ) {
    case PhotodiodeFn::Identity: return "identity";
    case PhotodiodeFn::Logistic: return "logistic";
    case PhotodiodeFn::HypTan: return "tanh";
    }
    return "?";
}

std::string_view to_string( KernelSign sign ) noexcept {
    return sign == KernelSign::Decaying ? "decaying" : "growing";
}

ReadoutMode parse_readout_mode( std::string_view text ) {
    const auto t = lower( text );
    if ( t == "ideal" || t == "ideal-linear" || t == "digital" ) return ReadoutMode::IdealLinear;
    if ( t == "analogue" || t == "analog" || t == "linear" ) return ReadoutMode::AnalogueLinear;
    if ( t == "nonlinear-readout" ) return ReadoutMode::NonlinearReadout;
    if ( t == "nonlinear-output" ) return ReadoutMode::NonlinearOutput;
    throw ConfigError( "readout_mode", "unknown mode '" + std::string( text ) + "'" );
}

PhotodiodeFn parse_photodiode_fn( std::string_view text ) {
    const auto t = lower( text );
    if ( t == "identity" || t == "linear" || t == "x" ) return PhotodiodeFn::Identity;
    if ( t == "logistic" || t == "lg" ) return PhotodiodeFn::Logistic;
    if ( t == "tanh" || t == "hyptan" || t == "ht" ) return PhotodiodeFn::HypTan;
    throw ConfigError( "photodiode_fn", "unknown function '" + std::string( text ) + "'" );
}

KernelSign parse_kernel_sign( std::string_view text ) {
    const auto t = lower( text );
    if ( t == "decaying" ) return KernelSign::Decaying;
    if ( t == "growing" ) return KernelSign::Growing;
    throw ConfigError( "kernel_sign", "unknown sign '" + std::string( text ) + "'" );
}

double ReservoirConfig::resolved_output_gain() const noexcept {
    if ( output_gain ) {
        return *output_gain;
    }
    // 1 / (rho * sum_{j<N} e^{-rho j})
    const double n = static_cast<double>( n_neurons );
    return -std::expm1( -rc_ratio ) / ( rc_ratio * -std::expm1( -rc_ratio * n ) );
}

const ReservoirConfig & validate_config( const ReservoirConfig & cfg ) {
    if ( cfg.n_neurons < 1 ) {
        throw ConfigError( "n_neurons", "must be at least 1" );
    }
    if ( !( cfg.feedback_gain >= 0.0 && cfg.feedback_gain <= 1.05 ) ) {
        throw ConfigError( "feedback_gain", "must lie in [0, 1.05]" );
    }
    if ( !( cfg.input_gain >= 0.0 && cfg.input_gain <= 1.5 ) ) {
        throw ConfigError( "input_gain", "must lie in [0, 1.5]" );
    }
    if ( !( cfg.rc_ratio > 0.0 ) || !std::isfinite( cfg.rc_ratio ) ) {
        throw ConfigError( "rc_ratio", "must be positive" );
    }
    if ( !std::isfinite( cfg.mz_bias ) ) {
        throw ConfigError( "mz_bias", "must be finite" );
    }
    if ( cfg.dac_bits && ( *cfg.dac_bits < 1 || *cfg.dac_bits > 52 ) ) {
        throw ConfigError( "dac_bits", "must lie in [1, 52] or be unquantized" );
    }
    if ( !( cfg.dac_range > 0.0 ) || !std::isfinite( cfg.dac_range ) ) {
        throw ConfigError( "dac_range", "must be positive" );
    }
    if ( cfg.output_gain && !( *cfg.output_gain > 0.0 && std::isfinite( *cfg.output_gain ) ) ) {
        throw ConfigError( "output_gain", "must be positive" );
    }
    if ( cfg.readout_mode == ReadoutMode::IdealLinear
         && cfg.photodiode_fn != PhotodiodeFn::Identity ) {
        throw ConfigError( "photodiode_fn", "ideal readout requires the identity photodiode" );
    }
    return cfg;
}

Rng::Rng( std::uint64_t seed ) : Rng( seed, 0, 0 ) {}

Rng::Rng( std::uint64_t seed, std::uint64_t tag, std::uint64_t index ) : m_seed( seed ) {
    // std::seed_seq and mt19937_64 are both fully specified by the standard.
    const std::array<std::uint32_t, 6> words{
        static_cast<std::uint32_t>( seed ),  static_cast<std::uint32_t>( seed >> 32 ),
        static_cast<std::uint32_t>( tag ),   static_cast<std::uint32_t>( tag >> 32 ),
        static_cast<std::uint32_t>( index ), static_cast<std::uint32_t>( index >> 32 ) };
    std::seed_seq seq( words.begin(), words.end() );
    m_engine.seed( seq );
}

Rng Rng::derive( std::string_view purpose, std::uint64_t index ) const {
    return Rng( m_seed, fnv1a( purpose ), index );
}

double Rng::uniform_closed() {
    constexpr double scale = 1.0 / static_cast<double>( ( 1ULL << 53 ) - 1 );
    return static_cast<double>( next_u64() >> 11 ) * scale;
}

double Rng::uniform01() {
    constexpr double scale = 1.0 / static_cast<double>( 1ULL << 53 );
    return static_cast<double>( next_u64() >> 11 ) * scale;
}

double Rng::normal() {
    if ( m_spare_normal ) {
        const double v = *m_spare_normal;
        m_spare_normal.reset();
        return v;
    }
    double u1 = uniform01();
    while ( u1 <= 0.0 ) {
        u1 = uniform01();
    }
    const double u2     = uniform01();
    const double radius = std::sqrt( -2.0 * std::log( u1 ) );
    const double angle  = 2.0 * std::numbers::pi * u2;
    m_spare_normal      = radius * std::sin( angle );
    return radius * std::cos( angle );
}

InputMask make_mask( Rng & rng, std::size_t n ) {
    if ( n == 0 ) {
        throw std::invalid_argument( "make_mask: n must be at least 1" );
    }
    InputMask mask;
    mask.values.resize( n );
    for ( auto & m : mask.values ) {
        m = rng.uniform( -1.0, 1.0 );
    }
    return mask;
}

} // namespace oerc
