mod five_segment_bid {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/five_segment_bid.rs"));
}

mod imperfect_null_stair {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/imperfect_null_stair.rs"));
}

mod battery_cluster {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/battery_cluster.rs"));
}

mod air_conditioner {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/air_conditioner.rs"));
}

mod ev_aggregator {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/ev_aggregator.rs"));
}

mod sensitivity {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/sensitivity.rs"));
}

mod negative_prices {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/negative_prices.rs"));
}

mod dp_oracle {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/dp_oracle.rs"));
}

mod export_and_plot {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/export_and_plot.rs"));
}

mod verification_suite {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/verification_suite.rs"));
}

#[test]
fn five_segment_bid_runs() {
    five_segment_bid::run_example().expect("five_segment_bid example should run");
}

#[test]
fn imperfect_null_stair_runs() {
    imperfect_null_stair::run_example().expect("imperfect_null_stair example should run");
}

#[test]
fn battery_cluster_runs() {
    battery_cluster::run_example().expect("battery_cluster example should run");
}

#[test]
fn air_conditioner_runs() {
    air_conditioner::run_example().expect("air_conditioner example should run");
}

#[test]
fn ev_aggregator_runs() {
    ev_aggregator::run_example().expect("ev_aggregator example should run");
}

#[test]
fn sensitivity_runs() {
    sensitivity::run_example().expect("sensitivity example should run");
}

#[test]
fn negative_prices_runs() {
    negative_prices::run_example().expect("negative_prices example should run");
}

#[test]
fn dp_oracle_runs() {
    dp_oracle::run_example().expect("dp_oracle example should run");
}

#[test]
fn export_and_plot_runs() {
    export_and_plot::run_example().expect("export_and_plot example should run");
}

#[test]
fn verification_suite_runs() {
    verification_suite::run_example().expect("verification_suite example should run");
}
