#include "oerc/harness.hpp"

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace oerc;

namespace
{

py::array_t<double> to_array( const std::vector<double> & v ) {
    return py::array_t<double>( static_cast<py::ssize_t>( v.size() ), v.data() );
}

py::array_t<double> to_array( const Matrix & m ) {
    py::array_t<double> out( { static_cast<py::ssize_t>( m.rows() ), static_cast<py::ssize_t>( m.cols() ) } );
    std::copy( m.data().begin(), m.data().end(), out.mutable_data() );
    return out;
}

std::vector<double> to_vector( const py::array_t<double, py::array::c_style | py::array::forcecast> & a ) {
    return { a.data(), a.data() + a.size() };
}

InputMask to_mask( const py::array_t<double, py::array::c_style | py::array::forcecast> & a ) {
    return InputMask{ to_vector( a ) };
}

} // namespace

PYBIND11_MODULE( _oerc, m ) {
    m.doc()               = "Opto-electronic reservoir computer with an analogue readout";
    m.attr( "__version__" ) = "0.1.0";

    py::register_exception<ConfigError>( m, "ConfigError", PyExc_ValueError );
    py::register_exception<DivergenceError>( m, "DivergenceError", PyExc_RuntimeError );
    py::register_exception<MetricError>( m, "MetricError", PyExc_ValueError );

    py::enum_<ReadoutMode>( m, "ReadoutMode" )
        .value( "IdealLinear", ReadoutMode::IdealLinear )
        .value( "AnalogueLinear", ReadoutMode::AnalogueLinear )
        .value( "NonlinearReadout", ReadoutMode::NonlinearReadout )
        .value( "NonlinearOutput", ReadoutMode::NonlinearOutput );
    py::enum_<PhotodiodeFn>( m, "PhotodiodeFn" )
        .value( "Identity", PhotodiodeFn::Identity )
        .value( "Logistic", PhotodiodeFn::Logistic )
        .value( "HypTan", PhotodiodeFn::HypTan );
    py::enum_<KernelSign>( m, "KernelSign" )
        .value( "Decaying", KernelSign::Decaying )
        .value( "Growing", KernelSign::Growing );
    py::enum_<TaskKind>( m, "TaskKind" )
        .value( "ChannelEq", TaskKind::ChannelEq )
        .value( "Narma10", TaskKind::Narma10 );

    py::class_<ReservoirConfig>( m, "ReservoirConfig" )
        .def( py::init<>() )
        .def_readwrite( "n_neurons", &ReservoirConfig::n_neurons )
        .def_readwrite( "feedback_gain", &ReservoirConfig::feedback_gain )
        .def_readwrite( "input_gain", &ReservoirConfig::input_gain )
        .def_readwrite( "rc_ratio", &ReservoirConfig::rc_ratio )
        .def_readwrite( "mz_bias", &ReservoirConfig::mz_bias )
        .def_readwrite( "dac_bits", &ReservoirConfig::dac_bits )
        .def_readwrite( "dac_range", &ReservoirConfig::dac_range )
        .def_readwrite( "readout_mode", &ReservoirConfig::readout_mode )
        .def_readwrite( "photodiode_fn", &ReservoirConfig::photodiode_fn )
        .def_readwrite( "kernel_sign", &ReservoirConfig::kernel_sign )
        .def_readwrite( "output_gain", &ReservoirConfig::output_gain )
        .def_readwrite( "output_offset", &ReservoirConfig::output_offset )
        .def_readwrite( "seed", &ReservoirConfig::seed )
        .def_readwrite( "washout", &ReservoirConfig::washout )
        .def_readwrite( "round_trip_time", &ReservoirConfig::round_trip_time )
        .def( "resolved_output_gain", &ReservoirConfig::resolved_output_gain )
        .def( "validate", []( const ReservoirConfig & c ) { validate_config( c ); } );

    py::class_<TrainSchedule>( m, "TrainSchedule" )
        .def( py::init<>() )
        .def_readwrite( "lambda0", &TrainSchedule::lambda0 )
        .def_readwrite( "lambda_min", &TrainSchedule::lambda_min )
        .def_readwrite( "gamma", &TrainSchedule::gamma )
        .def_readwrite( "update_rate", &TrainSchedule::update_rate )
        .def_readwrite( "train_len", &TrainSchedule::train_len );

    py::class_<Rng>( m, "Rng" )
        .def( py::init<std::uint64_t>() )
        .def( "derive", &Rng::derive, py::arg( "purpose" ), py::arg( "index" ) = 0 )
        .def( "uniform", &Rng::uniform )
        .def( "normal", &Rng::normal );

    m.def(
        "make_mask", []( Rng & rng, std::size_t n ) { return to_array( make_mask( rng, n ).values ); },
        py::arg( "rng" ), py::arg( "n" ) );
    m.def(
        "run_reservoir",
        []( const py::array_t<double, py::array::c_style | py::array::forcecast> & u,
            const py::array_t<double, py::array::c_style | py::array::forcecast> & mask,
            const ReservoirConfig & cfg ) {
            return to_array( run_reservoir( to_vector( u ), to_mask( mask ), cfg ).states );
        },
        py::arg( "u" ), py::arg( "mask" ), py::arg( "cfg" ) );

    py::class_<TaskData>( m, "TaskData" )
        .def_property_readonly( "input", []( const TaskData & t ) { return to_array( t.input ); } )
        .def_property_readonly( "target", []( const TaskData & t ) { return to_array( t.target ); } )
        .def_readonly( "train_len", &TaskData::train_len )
        .def_readonly( "test_len", &TaskData::test_len )
        .def_readonly( "kind", &TaskData::kind )
        .def_readonly( "head_edge", &TaskData::head_edge )
        .def( "__len__", &TaskData::size );
    m.def(
        "make_task",
        []( TaskKind kind, Rng & train_rng, Rng & test_rng, std::size_t train_len,
            std::size_t test_len, std::optional<double> snr_db ) {
            return make_task( kind, train_rng, test_rng, train_len, test_len, snr_db );
        },
        py::arg( "kind" ), py::arg( "train_rng" ), py::arg( "test_rng" ), py::arg( "train_len" ),
        py::arg( "test_len" ), py::arg( "snr_db" ) = py::none() );
    m.def( "narma10_targets", []( const py::array_t<double, py::array::c_style | py::array::forcecast> & u ) {
        return to_array( narma10_targets( to_vector( u ) ) );
    } );

    m.def(
        "ser",
        []( const py::array_t<double, py::array::c_style | py::array::forcecast> & y,
            const py::array_t<double, py::array::c_style | py::array::forcecast> & d,
            std::size_t washout ) { return ser( to_vector( y ), to_vector( d ), washout ); },
        py::arg( "y" ), py::arg( "d" ), py::arg( "washout" ) = 0 );
    m.def(
        "nmse",
        []( const py::array_t<double, py::array::c_style | py::array::forcecast> & y,
            const py::array_t<double, py::array::c_style | py::array::forcecast> & d,
            std::size_t washout ) { return nmse( to_vector( y ), to_vector( d ), washout ); },
        py::arg( "y" ), py::arg( "d" ), py::arg( "washout" ) = 0 );

    m.def( "lambda_at", &lambda_at, py::arg( "n" ), py::arg( "sched" ) );
    m.def( "logistic_response", &logistic_response );
    m.def( "hyptan_response", &hyptan_response );
    m.def( "quantize", &quantize, py::arg( "value" ), py::arg( "bits" ), py::arg( "range" ) );

    m.def(
        "run_online",
        []( const TaskData & task, const py::array_t<double, py::array::c_style | py::array::forcecast> & mask,
            const ReservoirConfig & cfg, const TrainSchedule & sched ) {
            const auto run = run_online( task, to_mask( mask ), cfg, sched );
            py::dict   out;
            out["weights"]     = to_array( run.training.weights.values );
            out["sq_error"]    = to_array( run.training.log.sq_error );
            out["lambda"]      = to_array( run.training.log.lambda );
            out["test_output"] = to_array( run.test_output );
            return out;
        },
        py::arg( "task" ), py::arg( "mask" ), py::arg( "cfg" ), py::arg( "sched" ) );
    m.def(
        "train_offline_ridge",
        []( const TaskData & task, const py::array_t<double, py::array::c_style | py::array::forcecast> & mask,
            const ReservoirConfig & cfg, double ridge ) {
            const auto fit = train_offline_ridge( task, to_mask( mask ), cfg, ridge );
            return py::make_tuple( to_array( fit.weights.values ), fit.offset );
        },
        py::arg( "task" ), py::arg( "mask" ), py::arg( "cfg" ), py::arg( "ridge" ) = kDefaultRidge );

    py::class_<RunResult>( m, "RunResult" )
        .def_readonly( "mask_id", &RunResult::mask_id )
        .def_readonly( "metric", &RunResult::metric )
        .def_readonly( "value", &RunResult::value )
        .def_readonly( "final_lambda", &RunResult::final_lambda )
        .def_readonly( "final_train_error", &RunResult::final_train_error )
        .def_readonly( "error", &RunResult::error )
        .def( "ok", &RunResult::ok );
    m.def( "run_once", &run_once, py::arg( "cfg" ), py::arg( "sched" ), py::arg( "task" ),
           py::arg( "test_len" ), py::arg( "mask_id" ), py::arg( "snr_db" ) = py::none() );

    m.def(
        "reproduce_table1",
        []( std::size_t n_masks, bool quick, std::uint64_t seed, unsigned threads ) {
            py::list out;
            for ( const auto & c : reproduce_table1( n_masks, quick, seed, threads ) ) {
                py::dict row;
                row["task"]         = std::string( to_string( c.task ) );
                row["readout_mode"] = std::string( to_string( c.mode ) );
                row["pd_fn"]        = std::string( to_string( c.pd ) );
                row["mean"]         = c.stats.mean;
                row["std"]          = c.stats.std;
                row["n"]            = c.stats.n;
                out.append( row );
            }
            return out;
        },
        py::arg( "n_masks" ) = 10, py::arg( "quick" ) = false, py::arg( "seed" ) = 42,
        py::arg( "threads" ) = 0 );
}
