use std::net::{IpAddr, SocketAddr};

use clap::Parser;
use tracing::info;

/// Serve the vawt design API over HTTP.
#[derive(Debug, Parser)]
#[command(name = "vawt-service", version)]
struct Config {
    /// Address to bind
    #[arg(long, env = "VAWT_BIND", default_value = "127.0.0.1")]
    bind: IpAddr,
    #[arg(long, env = "VAWT_PORT", default_value_t = 8080)]
    port: u16,
    /// Allowed CORS origins, comma separated
    #[arg(long = "cors-origin", env = "VAWT_CORS_ORIGINS", value_delimiter = ',')]
    cors_origins: Vec<String>,
}

#[tokio::main]
async fn main() -> Result<(), Box<dyn std::error::Error>> {
    tracing_subscriber::fmt()
        .with_env_filter(
            tracing_subscriber::EnvFilter::try_from_default_env().unwrap_or_else(|_| "info".into()),
        )
        .init();
    let config = Config::parse();
    let app = vawt_service::router(&config.cors_origins)?;
    let addr = SocketAddr::new(config.bind, config.port);
    let listener = tokio::net::TcpListener::bind(addr).await?;
    info!("listening on {}", listener.local_addr()?);
    axum::serve(listener, app)
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await?;
    Ok(())
}
