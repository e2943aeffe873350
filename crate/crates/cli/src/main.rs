use monokit_cli::{config::SEED_ENV, main_with_args};

fn main() {
    let env_seed = std::env::var(SEED_ENV).ok();
    std::process::exit(main_with_args(std::env::args_os(), env_seed.as_deref()));
}
