//! Minimal deterministic line-chart rendering to PNG.

use std::path::Path;

use image::{Rgb, RgbImage};

use crate::error::{Error, Result};

pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64)>,
}

const WIDTH: u32 = 800;
const HEIGHT: u32 = 600;
const MARGIN: u32 = 50;

const PALETTE: [Rgb<u8>; 6] = [
    Rgb([31, 119, 180]),
    Rgb([255, 127, 14]),
    Rgb([44, 160, 44]),
    Rgb([214, 39, 40]),
    Rgb([148, 103, 189]),
    Rgb([140, 86, 75]),
];

fn draw_line(img: &mut RgbImage, x0: i64, y0: i64, x1: i64, y1: i64, color: Rgb<u8>) {
    // Bresenham
    let dx = (x1 - x0).abs();
    let dy = -(y1 - y0).abs();
    let sx = if x0 < x1 { 1 } else { -1 };
    let sy = if y0 < y1 { 1 } else { -1 };
    let mut err = dx + dy;
    let (mut x, mut y) = (x0, y0);
    loop {
        if x >= 0 && y >= 0 && (x as u32) < WIDTH && (y as u32) < HEIGHT {
            img.put_pixel(x as u32, y as u32, color);
        }
        if x == x1 && y == y1 {
            break;
        }
        let e2 = 2 * err;
        if e2 >= dy {
            err += dy;
            x += sx;
        }
        if e2 <= dx {
            err += dx;
            y += sy;
        }
    }
}

/// Render the series as polylines over shared axes and write a PNG.
pub fn render_chart(path: &Path, series: &[Series]) -> Result<()> {
    let mut img = RgbImage::from_pixel(WIDTH, HEIGHT, Rgb([255, 255, 255]));

    let all: Vec<(f64, f64)> = series
        .iter()
        .flat_map(|s| s.points.iter().copied())
        .filter(|(x, y)| x.is_finite() && y.is_finite())
        .collect();
    if all.is_empty() {
        return Err(Error::Internal("nothing to plot".into()));
    }
    let (mut x_min, mut x_max) = (f64::INFINITY, f64::NEG_INFINITY);
    let (mut y_min, mut y_max) = (f64::INFINITY, f64::NEG_INFINITY);
    for (x, y) in &all {
        x_min = x_min.min(*x);
        x_max = x_max.max(*x);
        y_min = y_min.min(*y);
        y_max = y_max.max(*y);
    }
    if x_max == x_min {
        x_max = x_min + 1.0;
    }
    if y_max == y_min {
        y_max = y_min + 1.0;
    }

    let inner_w = (WIDTH - 2 * MARGIN) as f64;
    let inner_h = (HEIGHT - 2 * MARGIN) as f64;
    let to_px = |x: f64, y: f64| -> (i64, i64) {
        let px = MARGIN as f64 + (x - x_min) / (x_max - x_min) * inner_w;
        let py = (HEIGHT - MARGIN) as f64 - (y - y_min) / (y_max - y_min) * inner_h;
        (px.round() as i64, py.round() as i64)
    };

    // axes
    let axis = Rgb([0, 0, 0]);
    let (ox, oy) = (MARGIN as i64, (HEIGHT - MARGIN) as i64);
    draw_line(&mut img, ox, oy, (WIDTH - MARGIN) as i64, oy, axis);
    draw_line(&mut img, ox, oy, ox, MARGIN as i64, axis);

    for (i, s) in series.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        for w in s.points.windows(2) {
            let (x0, y0) = to_px(w[0].0, w[0].1);
            let (x1, y1) = to_px(w[1].0, w[1].1);
            draw_line(&mut img, x0, y0, x1, y1, color);
        }
    }

    img.save(path)
        .map_err(|e| Error::Internal(format!("png encode failed for {}: {e}", path.display())))
}
