#include "oerc/harness.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>
#include <thread>

namespace oerc
{

namespace
{

std::string trim( std::string_view s ) {
    const auto first = s.find_first_not_of( " \t\r\n" );
    if ( first == std::string_view::npos ) {
        return {};
    }
    const auto last = s.find_last_not_of( " \t\r\n" );
    return std::string( s.substr( first, last - first + 1 ) );
}

double to_double( const std::string & key, const std::string & text ) {
    const auto t = trim( text );
    double     v = 0.0;
    const auto [ptr, ec] = std::from_chars( t.data(), t.data() + t.size(), v );
    if ( ec != std::errc() || ptr != t.data() + t.size() || t.empty() ) {
        throw ConfigError( key, "expected a number, got '" + text + "'" );
    }
    return v;
}

std::uint64_t to_uint( const std::string & key, const std::string & text ) {
    const auto    t = trim( text );
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars( t.data(), t.data() + t.size(), v );
    if ( ec != std::errc() || ptr != t.data() + t.size() || t.empty() ) {
        throw ConfigError( key, "expected a non-negative integer, got '" + text + "'" );
    }
    return v;
}

bool to_bool( const std::string & key, const std::string & text ) {
    const auto t = trim( text );
    if ( t == "1" || t == "true" || t == "yes" || t == "on" ) return true;
    if ( t == "0" || t == "false" || t == "no" || t == "off" ) return false;
    throw ConfigError( key, "expected a boolean, got '" + text + "'" );
}

std::string canonical_key( const std::string & key ) {
    static const std::map<std::string, std::string> aliases{
        { "feedback_gain", "alpha" }, { "input_gain", "beta" },   { "rc_ratio", "rho" },
        { "mz_bias", "bias" },        { "photodiode_fn", "pd_fn" }, { "n_neurons", "n" },
        { "k", "update_rate" },       { "n_masks", "masks" },     { "snr_db", "snr" } };
    std::string k = key;
    std::replace( k.begin(), k.end(), '-', '_' );
    const auto it = aliases.find( k );
    return it == aliases.end() ? k : it->second;
}

std::string dac_bits_string( const std::optional<unsigned> & bits ) {
    return bits ? std::to_string( *bits ) : "none";
}

} // namespace

std::string format_number( double v ) {
    if ( std::isnan( v ) ) {
        return "nan";
    }
    char buf[64];
    const auto [ptr, ec] = std::to_chars( buf, buf + sizeof buf, v );
    return ec == std::errc() ? std::string( buf, ptr ) : std::string( "nan" );
}

ExperimentSpec default_spec( TaskKind kind ) {
    ExperimentSpec spec;
    spec.task = kind;
    if ( kind == TaskKind::ChannelEq ) {
        spec.base.feedback_gain = 0.8;
        spec.base.input_gain    = 0.2;
        spec.base.rc_ratio      = 0.03;
        spec.test_len           = 100000;
    } else {
        spec.base.feedback_gain = 0.95;
        spec.base.input_gain    = 0.8;
        spec.base.rc_ratio      = 0.003;
        spec.test_len           = 10000;
    }
    return spec;
}

void apply_quick_profile( ExperimentSpec & spec ) {
    spec.sched.train_len = 20000;
    spec.test_len        = spec.task == TaskKind::ChannelEq ? 10000 : 2000;
}

const std::vector<std::pair<std::string, std::string>> & config_keys() {
    static const std::vector<std::pair<std::string, std::string>> keys{
        { "task", "channel or narma10; selects the task defaults" },
        { "quick", "short train/test splits (true/false)" },
        { "seed", "root seed of every random stream" },
        { "masks", "number of input masks per grid point" },
        { "first_mask", "index of the first mask" },
        { "threads", "worker threads, 0 for all cores" },
        { "output", "output path prefix" },
        { "n", "number of neurons" },
        { "alpha", "feedback gain" },
        { "beta", "input gain" },
        { "rho", "RC integrator ratio theta/tau" },
        { "bias", "readout modulator bias" },
        { "dac_bits", "DAC resolution in bits, or none" },
        { "dac_range", "DAC full scale, weights clamp to +-range" },
        { "readout_mode", "ideal, analogue, nonlinear-readout or nonlinear-output" },
        { "pd_fn", "photodiode response: identity, logistic or tanh" },
        { "kernel_sign", "decaying or growing" },
        { "output_gain", "output amplifier gain, or auto" },
        { "output_offset", "trainable output offset (true/false)" },
        { "washout", "samples dropped before scoring" },
        { "round_trip_time", "round trip time in seconds" },
        { "lambda0", "initial step size" },
        { "lambda_min", "asymptotic step size" },
        { "gamma", "step size decay" },
        { "update_rate", "steps per step size decay" },
        { "train_len", "training samples" },
        { "test_len", "test samples" },
        { "snr", "channel noise SNR in dB, or none" },
        { "sweep", "param=grid to sweep; grid defaults per parameter" } };
    return keys;
}

void set_param( ExperimentSpec & spec, const std::string & raw_key, const std::string & raw ) {
    const auto key   = canonical_key( trim( raw_key ) );
    const auto value = trim( raw );
    auto &     cfg   = spec.base;
    auto &     sched = spec.sched;

    if ( key == "task" ) {
        const auto defaults = default_spec( parse_task_kind( value ) );
        spec.task           = defaults.task;
        spec.test_len       = defaults.test_len;
        cfg.feedback_gain   = defaults.base.feedback_gain;
        cfg.input_gain      = defaults.base.input_gain;
        cfg.rc_ratio        = defaults.base.rc_ratio;
    } else if ( key == "quick" ) {
        if ( to_bool( key, value ) ) {
            apply_quick_profile( spec );
        }
    } else if ( key == "seed" ) {
        cfg.seed = to_uint( key, value );
    } else if ( key == "masks" ) {
        spec.n_masks = to_uint( key, value );
        if ( spec.n_masks == 0 ) {
            throw ConfigError( key, "must be at least 1" );
        }
    } else if ( key == "first_mask" ) {
        spec.first_mask = to_uint( key, value );
    } else if ( key == "threads" ) {
        spec.threads = static_cast<unsigned>( to_uint( key, value ) );
    } else if ( key == "output" ) {
        spec.output = value;
    } else if ( key == "n" ) {
        cfg.n_neurons = to_uint( key, value );
    } else if ( key == "alpha" ) {
        cfg.feedback_gain = to_double( key, value );
    } else if ( key == "beta" ) {
        cfg.input_gain = to_double( key, value );
    } else if ( key == "rho" ) {
        cfg.rc_ratio = to_double( key, value );
    } else if ( key == "bias" ) {
        cfg.mz_bias = to_double( key, value );
    } else if ( key == "dac_bits" ) {
        if ( value == "none" || value.empty() ) {
            cfg.dac_bits.reset();
        } else {
            cfg.dac_bits = static_cast<unsigned>( to_uint( key, value ) );
        }
    } else if ( key == "dac_range" ) {
        cfg.dac_range = to_double( key, value );
    } else if ( key == "readout_mode" ) {
        cfg.readout_mode = parse_readout_mode( value );
    } else if ( key == "pd_fn" ) {
        cfg.photodiode_fn = parse_photodiode_fn( value );
    } else if ( key == "kernel_sign" ) {
        cfg.kernel_sign = parse_kernel_sign( value );
    } else if ( key == "output_gain" ) {
        if ( value == "auto" || value.empty() ) {
            cfg.output_gain.reset();
        } else {
            cfg.output_gain = to_double( key, value );
        }
    } else if ( key == "output_offset" ) {
        cfg.output_offset = to_bool( key, value );
    } else if ( key == "washout" ) {
        cfg.washout = to_uint( key, value );
    } else if ( key == "round_trip_time" ) {
        cfg.round_trip_time = to_double( key, value );
    } else if ( key == "lambda0" ) {
        sched.lambda0 = to_double( key, value );
    } else if ( key == "lambda_min" ) {
        sched.lambda_min = to_double( key, value );
    } else if ( key == "gamma" ) {
        sched.gamma = to_double( key, value );
    } else if ( key == "update_rate" ) {
        sched.update_rate = to_uint( key, value );
    } else if ( key == "train_len" ) {
        sched.train_len = to_uint( key, value );
    } else if ( key == "test_len" ) {
        spec.test_len = to_uint( key, value );
    } else if ( key == "snr" ) {
        if ( value == "none" || value.empty() ) {
            spec.snr_db.reset();
        } else {
            spec.snr_db = to_double( key, value );
        }
    } else if ( key == "sweep" || key.starts_with( "sweep." ) ) {
        std::string param;
        std::string grid;
        if ( key == "sweep" ) {
            const auto eq = value.find( '=' );
            param = trim( value.substr( 0, eq ) );
            grid  = eq == std::string::npos ? std::string() : trim( value.substr( eq + 1 ) );
        } else {
            param = key.substr( 6 );
            grid  = value;
        }
        param = canonical_key( param );
        if ( param.empty() || param == "sweep" || param == "task" || param == "quick"
             || param == "masks" || param == "threads" || param == "output" ) {
            throw ConfigError( "sweep", "cannot sweep '" + param + "'" );
        }
        auto values = grid.empty() ? default_grid( param ) : parse_grid( grid );
        // Reject bad values before any run starts.
        ExperimentSpec probe = spec;
        for ( const auto & v : values ) {
            set_param( probe, param, v );
            validate_config( probe.base );
            validate_schedule( probe.sched );
        }
        auto it = std::find_if( spec.sweep.begin(), spec.sweep.end(),
                                [&]( const auto & p ) { return p.first == param; } );
        if ( it != spec.sweep.end() ) {
            it->second = std::move( values );
        } else {
            spec.sweep.emplace_back( param, std::move( values ) );
        }
    } else {
        throw ConfigError( raw_key, "unknown configuration key" );
    }
}

ExperimentSpec build_spec( const std::vector<std::pair<std::string, std::string>> & settings ) {
    ExperimentSpec spec = default_spec( TaskKind::ChannelEq );
    for ( const auto & [k, v] : settings ) {
        if ( canonical_key( k ) == "task" ) {
            set_param( spec, k, v );
        }
    }
    for ( const auto & [k, v] : settings ) {
        if ( canonical_key( k ) == "quick" ) {
            set_param( spec, k, v );
        }
    }
    for ( const auto & [k, v] : settings ) {
        const auto key = canonical_key( k );
        if ( key != "task" && key != "quick" ) {
            set_param( spec, k, v );
        }
    }
    validate_config( spec.base );
    validate_schedule( spec.sched );
    return spec;
}

std::vector<std::pair<std::string, std::string>> parse_config( std::istream & in ) {
    std::vector<std::pair<std::string, std::string>> out;
    std::string                                      line;
    std::size_t                                      lineno = 0;
    while ( std::getline( in, line ) ) {
        ++lineno;
        if ( const auto hash = line.find( '#' ); hash != std::string::npos ) {
            line.erase( hash );
        }
        const auto body = trim( line );
        if ( body.empty() ) {
            continue;
        }
        const auto eq = body.find( '=' );
        if ( eq == std::string::npos ) {
            throw ConfigError( "line " + std::to_string( lineno ), "expected key = value" );
        }
        out.emplace_back( trim( body.substr( 0, eq ) ), trim( body.substr( eq + 1 ) ) );
    }
    return out;
}

std::vector<std::string> parse_grid( const std::string & text ) {
    const auto t = trim( text );
    std::vector<std::string> out;
    if ( t.starts_with( "lin:" ) || t.starts_with( "log:" ) ) {
        std::vector<double> parts;
        std::stringstream   ss( t.substr( 4 ) );
        std::string         item;
        while ( std::getline( ss, item, ':' ) ) {
            parts.push_back( to_double( "sweep", item ) );
        }
        if ( parts.size() != 3 || !( parts[2] > 0.0 ) || !( parts[1] >= parts[0] ) ) {
            throw ConfigError( "sweep", "expected lo:hi:step with lo <= hi and step > 0" );
        }
        const bool is_log = t.starts_with( "log:" );
        if ( is_log && !( parts[0] > 0.0 ) ) {
            throw ConfigError( "sweep", "log grid needs lo > 0" );
        }
        const double span  = is_log ? std::log10( parts[1] / parts[0] ) * parts[2]
                                    : ( parts[1] - parts[0] ) / parts[2];
        const auto   count = static_cast<std::size_t>( std::floor( span + 1e-9 ) ) + 1;
        for ( std::size_t i = 0; i < count; ++i ) {
            const double x = is_log ? parts[0] * std::pow( 10.0, static_cast<double>( i ) / parts[2] )
                                    : parts[0] + static_cast<double>( i ) * parts[2];
            // 12 significant digits hide the accumulated rounding.
            std::ostringstream os;
            os.precision( 12 );
            os << x;
            out.push_back( format_number( std::stod( os.str() ) ) );
        }
        return out;
    }
    std::stringstream ss( t );
    std::string       item;
    while ( std::getline( ss, item, ',' ) ) {
        if ( auto v = trim( item ); !v.empty() ) {
            out.push_back( std::move( v ) );
        }
    }
    if ( out.empty() ) {
        throw ConfigError( "sweep", "empty grid" );
    }
    return out;
}

std::vector<std::string> default_grid( const std::string & param ) {
    const auto key = canonical_key( param );
    if ( key == "beta" ) return parse_grid( "lin:0.1:0.9:0.1" );
    if ( key == "alpha" ) return parse_grid( "lin:0.6:1.0:0.05" );
    if ( key == "rho" ) return parse_grid( "log:1e-4:1:9" );
    if ( key == "bias" ) return parse_grid( "log:0.01:0.1:9" );
    if ( key == "dac_bits" ) return parse_grid( "lin:1:20:1" );
    if ( key == "readout_mode" ) return { "analogue", "nonlinear-readout", "nonlinear-output" };
    if ( key == "pd_fn" ) return { "identity", "logistic", "tanh" };
    throw ConfigError( "sweep", "no default grid for '" + param + "'" );
}

namespace
{

double score( TaskKind task, std::span<const double> y, const TaskData & data,
              std::size_t washout ) {
    return task == TaskKind::ChannelEq ? ser( y, data.test_target(), washout )
                                       : nmse( y, data.test_target(), washout );
}

RunResult blank_result( const ReservoirConfig & cfg, const TrainSchedule & sched, TaskKind task,
                        std::size_t test_len, std::size_t mask_id ) {
    RunResult r;
    r.cfg      = cfg;
    r.sched    = sched;
    r.task     = task;
    r.test_len = test_len;
    r.mask_id  = mask_id;
    r.metric   = task == TaskKind::ChannelEq ? "SER" : "NMSE";
    r.value    = std::numeric_limits<double>::quiet_NaN();
    return r;
}

} // namespace

RunInputs make_run_inputs( const ReservoirConfig & cfg, const TrainSchedule & sched,
                           TaskKind task, std::size_t test_len, std::size_t mask_id,
                           std::optional<double> snr_db ) {
    const Rng root( cfg.seed );
    auto      mask_rng  = root.derive( "mask", mask_id );
    auto      train_rng = root.derive( "train", mask_id );
    auto      test_rng  = root.derive( "test", mask_id );
    RunInputs s{ make_mask( mask_rng, cfg.n_neurons ), {} };
    s.data = make_task( task, train_rng, test_rng, sched.train_len, test_len, snr_db );
    return s;
}

RunResult run_once( const ReservoirConfig & cfg, const TrainSchedule & sched, TaskKind task,
                    std::size_t test_len, std::size_t mask_id, std::optional<double> snr_db ) {
    const auto start = std::chrono::steady_clock::now();
    validate_config( cfg );
    validate_schedule( sched );
    if ( test_len <= cfg.washout ) {
        throw ConfigError( "test_len", "must exceed the washout" );
    }
    auto r = blank_result( cfg, sched, task, test_len, mask_id );

    const auto s   = make_run_inputs( cfg, sched, task, test_len, mask_id, snr_db );
    const auto run = run_online( s.data, s.mask, cfg, sched );
    r.value        = score( task, run.test_output, s.data, cfg.washout );

    const auto & log = run.training.log;
    r.final_lambda   = log.lambda.empty() ? sched.lambda0 : log.lambda.back();
    const auto tail  = std::min<std::size_t>( 1000, log.sq_error.size() );
    if ( tail > 0 ) {
        r.final_train_error =
            std::accumulate( log.sq_error.end() - static_cast<std::ptrdiff_t>( tail ),
                             log.sq_error.end(), 0.0 )
            / static_cast<double>( tail );
    }
    r.wall_seconds =
        std::chrono::duration<double>( std::chrono::steady_clock::now() - start ).count();
    return r;
}

RunResult run_offline( const ReservoirConfig & cfg, const TrainSchedule & sched, TaskKind task,
                       std::size_t test_len, std::size_t mask_id, double ridge,
                       std::optional<double> snr_db ) {
    const auto start = std::chrono::steady_clock::now();
    validate_config( cfg );
    validate_schedule( sched );
    if ( test_len <= cfg.washout ) {
        throw ConfigError( "test_len", "must exceed the washout" );
    }
    auto r = blank_result( cfg, sched, task, test_len, mask_id );

    const auto s   = make_run_inputs( cfg, sched, task, test_len, mask_id, snr_db );
    const auto fit = train_offline_ridge( s.data, s.mask, cfg, ridge );
    const auto y   = run_frozen( s.data, s.mask, cfg, fit.weights, fit.offset );
    r.value        = score( task, y, s.data, cfg.washout );
    r.wall_seconds =
        std::chrono::duration<double>( std::chrono::steady_clock::now() - start ).count();
    return r;
}

AggregateRow aggregate( std::span<const RunResult> runs ) {
    AggregateRow row;
    double       sum = 0.0;
    for ( const auto & r : runs ) {
        if ( r.ok() ) {
            sum += r.value;
            ++row.n;
        } else {
            ++row.failures;
        }
    }
    if ( row.n == 0 ) {
        row.mean = row.std = std::numeric_limits<double>::quiet_NaN();
        return row;
    }
    row.mean  = sum / static_cast<double>( row.n );
    double ss = 0.0;
    for ( const auto & r : runs ) {
        if ( r.ok() ) {
            ss += ( r.value - row.mean ) * ( r.value - row.mean );
        }
    }
    row.std = row.n > 1 ? std::sqrt( ss / static_cast<double>( row.n - 1 ) ) : 0.0;
    return row;
}

SweepResult run_sweep( const ExperimentSpec & spec ) {
    // Expand the grid, last parameter fastest.
    std::vector<std::vector<std::pair<std::string, std::string>>> points{ {} };
    for ( const auto & [name, grid] : spec.sweep ) {
        if ( grid.empty() ) {
            throw ConfigError( "sweep", "empty grid for '" + name + "'" );
        }
        std::vector<std::vector<std::pair<std::string, std::string>>> next;
        for ( const auto & p : points ) {
            for ( const auto & v : grid ) {
                auto q = p;
                q.emplace_back( name, v );
                next.push_back( std::move( q ) );
            }
        }
        points = std::move( next );
    }

    std::vector<ExperimentSpec> configs;
    configs.reserve( points.size() );
    for ( const auto & p : points ) {
        ExperimentSpec s = spec;
        s.sweep.clear();
        for ( const auto & [name, v] : p ) {
            set_param( s, name, v );
        }
        validate_config( s.base );
        validate_schedule( s.sched );
        configs.push_back( std::move( s ) );
    }

    const std::size_t      masks = spec.n_masks;
    const std::size_t      jobs  = configs.size() * masks;
    std::vector<RunResult> runs( jobs );
    std::atomic<std::size_t> next{ 0 };

    auto worker = [&] {
        for ( std::size_t j = next++; j < jobs; j = next++ ) {
            const auto & c       = configs[j / masks];
            const auto   mask_id = spec.first_mask + j % masks;
            try {
                runs[j] = run_once( c.base, c.sched, c.task, c.test_len, mask_id, c.snr_db );
            } catch ( const std::exception & e ) {
                runs[j]       = blank_result( c.base, c.sched, c.task, c.test_len, mask_id );
                runs[j].error = e.what();
            }
        }
    };

    unsigned threads = spec.threads ? spec.threads : std::thread::hardware_concurrency();
    threads          = static_cast<unsigned>(
        std::clamp<std::size_t>( threads, 1, std::max<std::size_t>( jobs, 1 ) ) );
    if ( threads == 1 ) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for ( unsigned t = 0; t < threads; ++t ) {
            pool.emplace_back( worker );
        }
    }

    SweepResult result;
    result.rows.reserve( points.size() );
    for ( std::size_t p = 0; p < points.size(); ++p ) {
        auto row  = aggregate( std::span( runs ).subspan( p * masks, masks ) );
        row.point = points[p];
        result.rows.push_back( std::move( row ) );
    }
    result.runs = std::move( runs );
    return result;
}

std::vector<Table1Cell> reproduce_table1( std::size_t n_masks, bool quick, std::uint64_t seed,
                                          unsigned threads ) {
    if ( n_masks < 2 ) {
        throw ConfigError( "masks", "the scenario table needs at least 2 masks" );
    }
    const std::vector<std::pair<ReadoutMode, PhotodiodeFn>> scenarios{
        { ReadoutMode::AnalogueLinear, PhotodiodeFn::Identity },
        { ReadoutMode::NonlinearReadout, PhotodiodeFn::Logistic },
        { ReadoutMode::NonlinearReadout, PhotodiodeFn::HypTan },
        { ReadoutMode::NonlinearOutput, PhotodiodeFn::Logistic },
        { ReadoutMode::NonlinearOutput, PhotodiodeFn::HypTan } };
    std::vector<Table1Cell> cells;
    for ( const auto task : { TaskKind::ChannelEq, TaskKind::Narma10 } ) {
        for ( const auto & [mode, pd] : scenarios ) {
            auto spec = default_spec( task );
            if ( quick ) {
                apply_quick_profile( spec );
            }
            spec.base.seed          = seed;
            spec.base.readout_mode  = mode;
            spec.base.photodiode_fn = pd;
            spec.n_masks            = n_masks;
            spec.threads            = threads;
            auto result             = run_sweep( spec );
            cells.push_back( { task, mode, pd, std::move( result.rows.front() ) } );
        }
    }
    return cells;
}

std::map<std::string, SweepResult> figure_sweeps( std::size_t n_masks, bool quick,
                                                  std::uint64_t seed, unsigned threads ) {
    std::map<std::string, SweepResult> out;
    for ( const auto task : { TaskKind::ChannelEq, TaskKind::Narma10 } ) {
        for ( const std::string param : { "beta", "alpha", "rho", "bias", "dac_bits" } ) {
            auto spec = default_spec( task );
            if ( quick ) {
                apply_quick_profile( spec );
            }
            spec.base.seed = seed;
            spec.n_masks   = n_masks;
            spec.threads   = threads;
            set_param( spec, "sweep", param );
            out.emplace( param + "_" + std::string( to_string( task ) ), run_sweep( spec ) );
        }
    }
    return out;
}

void write_runs_csv( std::ostream & out, std::span<const RunResult> runs ) {
    out << kRunCsvHeader << '\n';
    for ( const auto & r : runs ) {
        out << to_string( r.task ) << ',' << r.mask_id << ',' << r.cfg.seed << ','
            << format_number( r.cfg.feedback_gain ) << ',' << format_number( r.cfg.input_gain )
            << ',' << format_number( r.cfg.rc_ratio ) << ',' << format_number( r.cfg.mz_bias )
            << ',' << dac_bits_string( r.cfg.dac_bits ) << ',' << to_string( r.cfg.readout_mode )
            << ',' << to_string( r.cfg.photodiode_fn ) << ',' << ( r.ok() ? r.metric : "failed" )
            << ',' << format_number( r.value ) << '\n';
    }
}

void write_aggregate_csv( std::ostream & out, std::span<const AggregateRow> rows ) {
    out << kAggregateCsvHeader << '\n';
    for ( const auto & row : rows ) {
        std::string names;
        std::string values;
        for ( const auto & [name, v] : row.point ) {
            names += ( names.empty() ? "" : ";" ) + name;
            values += ( values.empty() ? "" : ";" ) + v;
        }
        if ( names.empty() ) {
            names  = "none";
            values = "none";
        }
        out << names << ',' << values << ',' << format_number( row.mean ) << ','
            << format_number( row.std ) << ',' << row.n << '\n';
    }
}

void write_meta( std::ostream & out, const ExperimentSpec & spec, const SweepResult & result ) {
    const auto & c = spec.base;
    out << "task=" << to_string( spec.task ) << '\n'
        << "seed=" << c.seed << '\n'
        << "masks=" << spec.n_masks << '\n'
        << "first_mask=" << spec.first_mask << '\n'
        << "n=" << c.n_neurons << '\n'
        << "alpha=" << format_number( c.feedback_gain ) << '\n'
        << "beta=" << format_number( c.input_gain ) << '\n'
        << "rho=" << format_number( c.rc_ratio ) << '\n'
        << "bias=" << format_number( c.mz_bias ) << '\n'
        << "dac_bits=" << dac_bits_string( c.dac_bits ) << '\n'
        << "dac_range=" << format_number( c.dac_range ) << '\n'
        << "readout_mode=" << to_string( c.readout_mode ) << '\n'
        << "pd_fn=" << to_string( c.photodiode_fn ) << '\n'
        << "kernel_sign=" << to_string( c.kernel_sign ) << '\n'
        << "output_gain="
        << ( c.output_gain ? format_number( *c.output_gain ) : std::string( "auto" ) ) << '\n'
        << "output_offset=" << ( c.output_offset ? "true" : "false" ) << '\n'
        << "washout=" << c.washout << '\n'
        << "round_trip_time=" << format_number( c.round_trip_time ) << '\n'
        << "lambda0=" << format_number( spec.sched.lambda0 ) << '\n'
        << "lambda_min=" << format_number( spec.sched.lambda_min ) << '\n'
        << "gamma=" << format_number( spec.sched.gamma ) << '\n'
        << "update_rate=" << spec.sched.update_rate << '\n'
        << "train_len=" << spec.sched.train_len << '\n'
        << "test_len=" << spec.test_len << '\n'
        << "snr=" << ( spec.snr_db ? format_number( *spec.snr_db ) : std::string( "none" ) )
        << '\n';
    for ( const auto & [name, grid] : spec.sweep ) {
        out << "sweep." << name << '=';
        for ( std::size_t i = 0; i < grid.size(); ++i ) {
            out << ( i ? "," : "" ) << grid[i];
        }
        out << '\n';
    }
    double total = 0.0;
    for ( std::size_t i = 0; i < result.runs.size(); ++i ) {
        const auto & r = result.runs[i];
        total += r.wall_seconds;
        if ( !r.ok() ) {
            out << "failure." << i << '=' << r.error << '\n';
        }
    }
    for ( std::size_t i = 0; i < result.rows.size(); ++i ) {
        if ( result.rows[i].failures ) {
            out << "row_failures." << i << '=' << result.rows[i].failures << '\n';
        }
    }
    out << "wall_seconds=" << format_number( total ) << '\n';
}

void write_table1( std::ostream & out, std::span<const Table1Cell> cells ) {
    out << "task,readout_mode,pd_fn,mean,std,n\n";
    for ( const auto & c : cells ) {
        out << to_string( c.task ) << ',' << to_string( c.mode ) << ',' << to_string( c.pd ) << ','
            << format_number( c.stats.mean ) << ',' << format_number( c.stats.std ) << ','
            << c.stats.n << '\n';
    }
}

} // namespace oerc
