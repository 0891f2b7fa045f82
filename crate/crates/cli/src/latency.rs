use crate::{to_json, write_file, Failure, EXIT_INVALID};
use fpsci_core::analysis::{histogram_svg, latency_summary, LatencySummary};
use fpsci_core::simcore::click_to_photon_model;
use serde::Serialize;
use std::path::PathBuf;

#[derive(clap::Args)]
pub struct Args {
    /// Simulation frame rate in Hz.
    #[arg(long, default_value_t = 60.0)]
    pub fps: f64,
    /// Display refresh rate in Hz.
    #[arg(long, default_value_t = 60.0)]
    pub refresh: f64,
    /// Whole frames of injected input delay.
    #[arg(long, default_value_t = 0)]
    pub delay_frames: u32,
    #[arg(long, default_value_t = 2000)]
    pub clicks: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Write the JSON summary here as well as to stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Write an SVG histogram.
    #[arg(long)]
    pub plot: Option<PathBuf>,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct Report {
    fps: f64,
    refresh: f64,
    delay_frames: u32,
    clicks: usize,
    seed: u64,
    #[serde(flatten)]
    summary: LatencySummary,
}

pub fn run(args: &Args) -> Result<(), Failure> {
    let samples = click_to_photon_model(args.fps, args.refresh, args.delay_frames, args.clicks, args.seed)
        .map_err(|e| Failure::new(EXIT_INVALID, e.to_string()))?;
    let summary = latency_summary(&samples).map_err(|e| Failure::new(EXIT_INVALID, e.to_string()))?;
    if let Some(path) = &args.plot {
        let title = format!(
            "{} clicks, {} fps, {} Hz, {} frames delay",
            args.clicks, args.fps, args.refresh, args.delay_frames
        );
        write_file(path, histogram_svg(&summary, &title).as_bytes())?;
    }
    let json = to_json(&Report {
        fps: args.fps,
        refresh: args.refresh,
        delay_frames: args.delay_frames,
        clicks: args.clicks,
        seed: args.seed,
        summary,
    });
    if let Some(path) = &args.out {
        write_file(path, json.as_bytes())?;
    }
    print!("{json}");
    Ok(())
}
