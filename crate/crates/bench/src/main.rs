fn main() {
    let env_seed = std::env::var(commbench::config::SEED_ENV).ok();
    std::process::exit(commbench::cli::run(std::env::args_os(), env_seed.as_deref()));
}
