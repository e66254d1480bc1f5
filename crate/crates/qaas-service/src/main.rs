use std::sync::Arc;

fn env_number<T: std::str::FromStr>(name: &str, default: T) -> T {
    match std::env::var(name) {
        Ok(text) => match text.parse() {
            Ok(v) => v,
            Err(_) => {
                eprintln!("error: {name}={text:?} is not a number");
                std::process::exit(2);
            }
        },
        Err(_) => default,
    }
}

fn main() {
    let port: u16 = env_number("QUASIM_PORT", 8080);
    let workers: usize = env_number("QUASIM_WORKERS", 1);

    let runtime = match tokio::runtime::Builder::new_multi_thread().enable_all().build() {
        Ok(rt) => rt,
        Err(e) => {
            eprintln!("error: cannot start runtime: {e}");
            std::process::exit(3);
        }
    };
    runtime.block_on(async move {
        let listener = match tokio::net::TcpListener::bind(("0.0.0.0", port)).await {
            Ok(l) => l,
            Err(e) => {
                eprintln!("error: cannot bind port {port}: {e}");
                std::process::exit(3);
            }
        };
        let state: Arc<qaas_service::ServiceState> = qaas_service::ServiceState::start(workers);
        eprintln!("listening on 0.0.0.0:{port} with {workers} worker(s)");
        if let Err(e) = axum::serve(listener, qaas_service::router(state)).await {
            eprintln!("error: {e}");
            std::process::exit(3);
        }
    });
}
