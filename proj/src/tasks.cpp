#include "oerc/tasks.hpp"

#include <cmath>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

namespace oerc
{

std::string_view to_string( TaskKind kind ) noexcept {
    return kind == TaskKind::ChannelEq ? "channel" : "narma10";
}

TaskKind parse_task_kind( std::string_view text ) {
    if ( text == "channel" || text == "channel-eq" || text == "ChannelEq" ) {
        return TaskKind::ChannelEq;
    }
    if ( text == "narma10" || text == "narma" || text == "Narma10" ) {
        return TaskKind::Narma10;
    }
    throw ConfigError( "task", "unknown task '" + std::string( text ) + "'" );
}

std::vector<double> channel_symbols( Rng & rng, std::size_t length ) {
    std::vector<double> d( length );
    for ( auto & s : d ) {
        s = kChannelSymbols[rng.bits( 2 )];
    }
    return d;
}

std::vector<double> channel_linear( std::span<const double> symbols ) {
    const auto          len = static_cast<std::ptrdiff_t>( symbols.size() );
    std::vector<double> q( symbols.size(), 0.0 );
    for ( std::ptrdiff_t n = 0; n < len; ++n ) {
        double acc = 0.0;
        for ( std::size_t t = 0; t < kChannelTaps.size(); ++t ) {
            const auto idx = n + static_cast<std::ptrdiff_t>( kChannelLead )
                             - static_cast<std::ptrdiff_t>( t );
            if ( idx >= 0 && idx < len ) {
                acc += kChannelTaps[t] * symbols[static_cast<std::size_t>( idx )];
            }
        }
        q[static_cast<std::size_t>( n )] = acc;
    }
    return q;
}

double channel_nonlinearity( double q ) noexcept {
    return q + 0.036 * q * q - 0.011 * q * q * q;
}

namespace
{

std::vector<double> distort( std::span<const double> symbols ) {
    auto u = channel_linear( symbols );
    for ( auto & v : u ) {
        v = channel_nonlinearity( v );
    }
    return u;
}

void add_noise( std::span<double> u, Rng & rng, double snr_db ) {
    if ( u.empty() ) {
        return;
    }
    double power = 0.0;
    for ( const double v : u ) {
        power += v * v;
    }
    power /= static_cast<double>( u.size() );
    const double sigma = std::sqrt( power / std::pow( 10.0, snr_db / 10.0 ) );
    for ( auto & v : u ) {
        v += sigma * rng.normal();
    }
}

bool narma_diverged( std::span<const double> d ) {
    for ( const double v : d ) {
        if ( !std::isfinite( v ) || std::abs( v ) > 1.0 ) {
            return true;
        }
    }
    return false;
}

} // namespace

TaskData gen_channel( Rng & rng, std::size_t length, std::optional<double> snr_db ) {
    if ( length < 2 * kChannelEdge ) {
        throw std::invalid_argument( "gen_channel: length must be at least 20" );
    }
    TaskData task;
    task.kind   = TaskKind::ChannelEq;
    task.target = channel_symbols( rng, length );
    task.input  = distort( task.target );
    if ( snr_db ) {
        add_noise( task.input, rng, *snr_db );
    }
    task.head_edge = kChannelEdge;
    task.train_len = length - kChannelEdge;
    task.test_len  = 0;
    return task;
}

std::vector<double> narma10_targets( std::span<const double> u ) {
    // d_hist[m] holds d(m); d(m) = 0 for m <= 0.
    const auto          len = u.size();
    std::vector<double> d( len + 1, 0.0 );
    for ( std::size_t n = 0; n < len; ++n ) {
        double window = 0.0;
        for ( std::size_t i = 0; i < 10 && i <= n; ++i ) {
            window += d[n - i];
        }
        const double lagged_u = n >= 9 ? u[n - 9] : 0.0;
        d[n + 1] = 0.3 * d[n] + 0.05 * d[n] * window + 1.5 * lagged_u * u[n] + 0.1;
    }
    return { d.begin() + 1, d.end() };
}

TaskData gen_narma10( Rng & rng, std::size_t length ) {
    if ( length < 10 ) {
        throw std::invalid_argument( "gen_narma10: length must be at least 10" );
    }
    TaskData task;
    task.kind = TaskKind::Narma10;
    task.input.resize( length );
    for ( std::size_t attempt = 0; attempt < kMaxNarmaRegenerations; ++attempt ) {
        for ( auto & v : task.input ) {
            v = rng.uniform( 0.0, 0.5 );
        }
        task.target = narma10_targets( task.input );
        if ( !narma_diverged( task.target ) ) {
            task.train_len     = length;
            task.regenerations = attempt;
            return task;
        }
    }
    throw GenerationError( "gen_narma10: 100 consecutive divergent sequences" );
}

TaskData make_task( TaskKind kind, Rng & train_rng, Rng & test_rng, std::size_t train_len,
                    std::size_t test_len, std::optional<double> snr_db ) {
    if ( train_len == 0 ) {
        throw std::invalid_argument( "make_task: train_len must be positive" );
    }
    TaskData task;
    task.kind      = kind;
    task.train_len = train_len;
    task.test_len  = test_len;

    if ( kind == TaskKind::ChannelEq ) {
        if ( train_len <= kChannelEdge ) {
            throw std::invalid_argument( "make_task: channel training set shorter than its edge" );
        }
        auto symbols = channel_symbols( train_rng, train_len );
        auto tail    = channel_symbols( test_rng, test_len + kChannelEdge );
        symbols.insert( symbols.end(), tail.begin(), tail.end() );
        task.input  = distort( symbols );
        task.target = std::move( symbols );
        if ( snr_db ) {
            add_noise( std::span( task.input ).first( train_len ), train_rng, *snr_db );
            add_noise( std::span( task.input ).subspan( train_len ), test_rng, *snr_db );
        }
        task.head_edge = kChannelEdge;
        return task;
    }

    task.input.resize( train_len + test_len );
    for ( std::size_t attempt = 0; attempt < kMaxNarmaRegenerations; ++attempt ) {
        for ( std::size_t n = 0; n < train_len; ++n ) {
            task.input[n] = train_rng.uniform( 0.0, 0.5 );
        }
        for ( std::size_t n = train_len; n < task.input.size(); ++n ) {
            task.input[n] = test_rng.uniform( 0.0, 0.5 );
        }
        task.target = narma10_targets( task.input );
        if ( !narma_diverged( task.target ) ) {
            task.regenerations = attempt;
            return task;
        }
    }
    throw GenerationError( "make_task: 100 consecutive divergent NARMA10 sequences" );
}

double quantize_symbol( double y ) noexcept {
    if ( y >= 2.0 ) return 3.0;
    if ( y >= 0.0 ) return 1.0;
    if ( y >= -2.0 ) return -1.0;
    return -3.0;
}

namespace
{

void check_metric_args( const char * name, std::span<const double> y,
                        std::span<const double> d, std::size_t washout ) {
    if ( y.size() != d.size() ) {
        throw std::invalid_argument( std::string( name ) + ": length mismatch" );
    }
    if ( y.size() <= washout ) {
        throw std::invalid_argument( std::string( name ) + ": nothing left after washout" );
    }
}

} // namespace

double ser( std::span<const double> y, std::span<const double> d, std::size_t washout ) {
    check_metric_args( "ser", y, d, washout );
    std::size_t wrong = 0;
    for ( std::size_t n = washout; n < y.size(); ++n ) {
        if ( quantize_symbol( y[n] ) != d[n] ) {
            ++wrong;
        }
    }
    return static_cast<double>( wrong ) / static_cast<double>( y.size() - washout );
}

double nmse( std::span<const double> y, std::span<const double> d, std::size_t washout ) {
    check_metric_args( "nmse", y, d, washout );
    const auto   count = static_cast<double>( y.size() - washout );
    double       mean  = 0.0;
    for ( std::size_t n = washout; n < d.size(); ++n ) {
        mean += d[n];
    }
    mean /= count;
    double err = 0.0;
    double var = 0.0;
    for ( std::size_t n = washout; n < d.size(); ++n ) {
        err += ( y[n] - d[n] ) * ( y[n] - d[n] );
        var += ( d[n] - mean ) * ( d[n] - mean );
    }
    if ( var <= 0.0 ) {
        throw MetricError( "nmse: target has zero variance" );
    }
    return err / var;
}

void write_task_csv( std::ostream & out, const TaskData & task ) {
    out << "u,d\n" << std::setprecision( 17 );
    for ( std::size_t n = 0; n < task.size(); ++n ) {
        out << task.input[n] << ',' << task.target[n] << '\n';
    }
}

TaskData read_task_csv( std::istream & in, TaskKind kind, std::size_t train_len,
                        std::size_t test_len ) {
    std::string line;
    if ( !std::getline( in, line ) || line.rfind( "u,d", 0 ) != 0 ) {
        throw std::invalid_argument( "read_task_csv: expected header u,d" );
    }
    TaskData task;
    task.kind = kind;
    while ( std::getline( in, line ) ) {
        if ( line.empty() || line == "\r" ) {
            continue;
        }
        const auto comma = line.find( ',' );
        if ( comma == std::string::npos ) {
            throw std::invalid_argument( "read_task_csv: malformed row '" + line + "'" );
        }
        task.input.push_back( std::stod( line.substr( 0, comma ) ) );
        task.target.push_back( std::stod( line.substr( comma + 1 ) ) );
    }
    if ( task.size() < train_len + test_len ) {
        throw std::invalid_argument( "read_task_csv: fewer rows than train_len + test_len" );
    }
    task.train_len = train_len;
    task.test_len  = test_len;
    task.head_edge = kind == TaskKind::ChannelEq ? kChannelEdge : 0;
    return task;
}

} // namespace oerc
