#[global_allocator]
static ALLOC: lastfirst::bench::TrackingAllocator = lastfirst::bench::TrackingAllocator;

fn main() {
    if let Err(e) = lastfirst::cli::init_threads() {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
    std::process::exit(lastfirst::cli::run(std::env::args_os()));
}
