// oerc: command-line front end for the reservoir simulator.
//
//   oerc run     --task narma10 --masks 5
//   oerc sweep   --task channel --sweep rho --output out/rho
//   oerc table1  --masks 10 --output table1.csv
//   oerc figures --quick --output figures/

#include "oerc/harness.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>

namespace
{

using Settings = std::vector<std::pair<std::string, std::string>>;

struct Options
{
    std::string                        config_path;
    std::map<std::string, std::string> values;
    std::vector<std::string>           sweeps;
};

void add_config_flags( CLI::App & cmd, Options & opt ) {
    cmd.add_option( "--config", opt.config_path, "key = value configuration file" )
        ->check( CLI::ExistingFile );
    for ( const auto & [key, help] : oerc::config_keys() ) {
        if ( key == "sweep" ) {
            cmd.add_option( "--sweep", opt.sweeps, help );
            continue;
        }
        auto names = "--" + key;
        if ( key.find( '_' ) != std::string::npos ) {
            auto dashed = key;
            std::replace( dashed.begin(), dashed.end(), '_', '-' );
            names += ",--" + dashed;
        }
        cmd.add_option( names, opt.values[key], help );
    }
}

Settings collect( const CLI::App & cmd, const Options & opt ) {
    Settings out;
    if ( !opt.config_path.empty() ) {
        std::ifstream in( opt.config_path );
        if ( !in ) {
            throw std::runtime_error( "cannot read " + opt.config_path );
        }
        out = oerc::parse_config( in );
    }
    for ( const auto & [key, value] : opt.values ) {
        if ( cmd.count( "--" + key ) > 0 ) {
            out.emplace_back( key, value );
        }
    }
    for ( const auto & s : opt.sweeps ) {
        out.emplace_back( "sweep", s );
    }
    return out;
}

std::ofstream open_out( const std::filesystem::path & path ) {
    if ( path.has_parent_path() ) {
        std::filesystem::create_directories( path.parent_path() );
    }
    std::ofstream out( path );
    if ( !out ) {
        throw std::runtime_error( "cannot write " + path.string() );
    }
    return out;
}

void write_sweep( const oerc::ExperimentSpec & spec, const oerc::SweepResult & result,
                  const std::string & prefix ) {
    auto runs = open_out( prefix + ".runs.csv" );
    oerc::write_runs_csv( runs, result.runs );
    auto agg = open_out( prefix + ".agg.csv" );
    oerc::write_aggregate_csv( agg, result.rows );
    auto meta = open_out( prefix + ".meta" );
    oerc::write_meta( meta, spec, result );
}

void summarise( const oerc::SweepResult & result ) {
    for ( const auto & row : result.rows ) {
        for ( const auto & [name, v] : row.point ) {
            std::cerr << name << '=' << v << ' ';
        }
        std::cerr << "mean=" << oerc::format_number( row.mean )
                  << " std=" << oerc::format_number( row.std ) << " n=" << row.n;
        if ( row.failures ) {
            std::cerr << " failed=" << row.failures;
        }
        std::cerr << '\n';
    }
}

int cmd_run( const oerc::ExperimentSpec & spec, const std::string & trace_path,
             const std::string & log_path, const std::string & data_path ) {
    if ( !spec.sweep.empty() ) {
        throw oerc::ConfigError( "sweep", "run takes a single configuration; use sweep" );
    }
    const auto result = oerc::run_sweep( spec );
    if ( spec.output.empty() ) {
        oerc::write_runs_csv( std::cout, result.runs );
    } else {
        write_sweep( spec, result, spec.output );
    }
    summarise( result );

    if ( !trace_path.empty() || !log_path.empty() || !data_path.empty() ) {
        const auto in = oerc::make_run_inputs( spec.base, spec.sched, spec.task, spec.test_len,
                                               spec.first_mask, spec.snr_db );
        if ( !data_path.empty() ) {
            auto out = open_out( data_path );
            oerc::write_task_csv( out, in.data );
        }
        if ( !trace_path.empty() ) {
            auto out = open_out( trace_path );
            oerc::write_trace_csv( out, oerc::run_reservoir( in.data.input, in.mask, spec.base ) );
        }
        if ( !log_path.empty() ) {
            auto out = open_out( log_path );
            oerc::train_online( in.data, in.mask, spec.base, spec.sched ).log.write_csv( out );
        }
    }
    for ( const auto & r : result.runs ) {
        if ( !r.ok() ) {
            std::cerr << "mask " << r.mask_id << ": " << r.error << '\n';
            return 2;
        }
    }
    return 0;
}

int cmd_sweep( const oerc::ExperimentSpec & spec ) {
    if ( spec.sweep.empty() ) {
        throw oerc::ConfigError( "sweep", "no parameter to sweep; pass --sweep name[=grid]" );
    }
    const auto result = oerc::run_sweep( spec );
    if ( spec.output.empty() ) {
        oerc::write_aggregate_csv( std::cout, result.rows );
    } else {
        write_sweep( spec, result, spec.output );
    }
    summarise( result );
    return 0;
}

} // namespace

int main( int argc, char ** argv ) {
    CLI::App app{ "Opto-electronic reservoir computer with an analogue readout" };
    app.require_subcommand( 1 );

    Options     run_opt;
    std::string trace_path;
    std::string log_path;
    std::string data_path;
    auto *      run = app.add_subcommand( "run", "train and test one configuration over the masks" );
    add_config_flags( *run, run_opt );
    run->add_option( "--trace", trace_path, "reservoir trace CSV of the first mask" );
    run->add_option( "--train-log", log_path, "training log CSV of the first mask" );
    run->add_option( "--task-data", data_path, "task input/target CSV of the first mask" );

    Options sweep_opt;
    auto *  sweep = app.add_subcommand( "sweep", "grid over one or more parameters" );
    add_config_flags( *sweep, sweep_opt );

    std::size_t   t1_masks = 10;
    bool          t1_quick = false;
    std::uint64_t t1_seed  = 42;
    unsigned      t1_threads = 0;
    std::string   t1_output;
    auto *        table1 = app.add_subcommand( "table1", "the ten readout scenarios" );
    table1->add_option( "--masks", t1_masks, "masks per cell" )->check( CLI::Range( 2, 1000 ) );
    table1->add_flag( "--quick", t1_quick, "short train/test splits" );
    table1->add_option( "--seed", t1_seed, "root seed" );
    table1->add_option( "--threads", t1_threads, "worker threads, 0 for all cores" );
    table1->add_option( "--output", t1_output, "CSV path, stdout if empty" );

    std::size_t   fig_masks = 10;
    bool          fig_quick = false;
    std::uint64_t fig_seed  = 42;
    unsigned      fig_threads = 0;
    std::string   fig_output  = "figures";
    auto *        figures = app.add_subcommand( "figures", "data behind the parameter scans" );
    figures->add_option( "--masks", fig_masks, "masks per grid point" )->check( CLI::Range( 1, 1000 ) );
    figures->add_flag( "--quick", fig_quick, "short train/test splits" );
    figures->add_option( "--seed", fig_seed, "root seed" );
    figures->add_option( "--threads", fig_threads, "worker threads, 0 for all cores" );
    figures->add_option( "--output", fig_output, "output directory" );

    CLI11_PARSE( app, argc, argv );

    try {
        if ( *run ) {
            return cmd_run( oerc::build_spec( collect( *run, run_opt ) ), trace_path, log_path,
                            data_path );
        }
        if ( *sweep ) {
            return cmd_sweep( oerc::build_spec( collect( *sweep, sweep_opt ) ) );
        }
        if ( *table1 ) {
            const auto cells = oerc::reproduce_table1( t1_masks, t1_quick, t1_seed, t1_threads );
            if ( t1_output.empty() ) {
                oerc::write_table1( std::cout, cells );
            } else {
                auto out = open_out( t1_output );
                oerc::write_table1( out, cells );
            }
            return 0;
        }
        if ( *figures ) {
            const auto sweeps = oerc::figure_sweeps( fig_masks, fig_quick, fig_seed, fig_threads );
            for ( const auto & [stem, result] : sweeps ) {
                const auto prefix = ( std::filesystem::path( fig_output ) / stem ).string();
                auto       runs   = open_out( prefix + ".runs.csv" );
                oerc::write_runs_csv( runs, result.runs );
                auto agg = open_out( prefix + ".agg.csv" );
                oerc::write_aggregate_csv( agg, result.rows );
                std::cerr << "wrote " << prefix << ".{runs,agg}.csv\n";
            }
            return 0;
        }
    } catch ( const oerc::ConfigError & e ) {
        std::cerr << "config error: " << e.what() << '\n';
        return 1;
    } catch ( const std::exception & e ) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
