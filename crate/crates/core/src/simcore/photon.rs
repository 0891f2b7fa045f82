use super::clock::next_boundary;
use super::SimError;
use crate::seed;
use rand::Rng;

/// Frames spanned by the random click times; long enough that every phase
/// relation between frame and refresh clocks is sampled.
const CLICK_WINDOW_FRAMES: u64 = 1 << 20;

/// Simulated click-to-photon latencies in milliseconds.
///
/// Each click lands at a uniformly random time. It is sampled at the next
/// frame start, takes one frame to simulate and render, waits `delay_frames`
/// more frames in the input queue, is presented at the next refresh boundary
/// and lights the middle row of the display half a refresh later.
pub fn click_to_photon_model(
    frame_rate: f64,
    refresh_rate: f64,
    delay_frames: u32,
    n_clicks: usize,
    seed: u64,
) -> Result<Vec<f64>, SimError> {
    if !(frame_rate > 0.0 && frame_rate.is_finite()) {
        return Err(SimError::NonPositive("frameRate"));
    }
    if !(refresh_rate > 0.0 && refresh_rate.is_finite()) {
        return Err(SimError::NonPositive("refreshRate"));
    }
    if n_clicks == 0 {
        return Err(SimError::NonPositive("clicks"));
    }
    let frame = 1.0 / frame_rate;
    let refresh = 1.0 / refresh_rate;
    let mut rng = seed::rng(seed);
    Ok((0..n_clicks)
        .map(|_| {
            let k = rng.random_range(0..CLICK_WINDOW_FRAMES);
            let phase: f64 = rng.random();
            let click = (k as f64 + phase) * frame;
            let sampled = if phase == 0.0 { k } else { k + 1 };
            let done = (sampled + 1 + u64::from(delay_frames)) as f64 * frame;
            let photon = next_boundary(done, refresh) + refresh / 2.0;
            (photon - click) * 1000.0
        })
        .collect())
}
