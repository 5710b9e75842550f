use super::line::WeightedLine;
use super::shift::report;
use super::sets::IntervalUnion;
use super::MinimizerReport;
use crate::{Error, Result};

pub const MAX_GRID: usize = 400;

/// Candidate endpoint with its distribution value and boundary weight.
struct Node {
    x: f64,
    cdf: f64,
    weight: f64,
}

fn nodes(line: &WeightedLine, grid_size: usize) -> Result<(Vec<Node>, f64)> {
    let s = line.support();
    let d = line.domain();
    let xs: Vec<f64> = (0..grid_size)
        .map(|i| s.lo() + s.width() * i as f64 / (grid_size - 1) as f64)
        .collect();
    let mut out = Vec::with_capacity(grid_size + 2);
    if d.lo_is_infinite() {
        out.push(Node {
            x: f64::NEG_INFINITY,
            cdf: 0.0,
            weight: 0.0,
        });
    }
    let mut cdf = line.lower_mass(xs[0])?;
    let mut max_cell = cdf;
    for (i, &x) in xs.iter().enumerate() {
        if i > 0 {
            let cell = line.mass_between(xs[i - 1], x)?;
            max_cell = max_cell.max(cell);
            cdf += cell;
        }
        let interior = x > d.lo() && x < d.hi();
        out.push(Node {
            x,
            cdf,
            weight: if interior { line.density(x) } else { 0.0 },
        });
    }
    if d.hi_is_infinite() {
        max_cell = max_cell.max(1.0 - cdf);
        out.push(Node {
            x: f64::INFINITY,
            cdf: 1.0,
            weight: 0.0,
        });
    }
    Ok((out, max_cell))
}

/// Exhaustive search over unions of at most `max_components` intervals
/// with endpoints on a uniform grid over the support (plus infinite ends),
/// among sets whose mass is within one grid cell of `theta`.
pub fn brute_force_minimizer(
    line: &WeightedLine,
    theta: f64,
    max_components: usize,
    grid_size: usize,
) -> Result<MinimizerReport> {
    if !(theta > 0.0 && theta < 1.0) {
        return Err(Error::ThetaOutOfRange(theta));
    }
    if !(1..=2).contains(&max_components) || !(8..=MAX_GRID).contains(&grid_size) {
        return Err(Error::Parameter(format!(
            "brute force supports 1..=2 components and 8..={MAX_GRID} grid points"
        )));
    }
    let (nodes, tol) = nodes(line, grid_size)?;
    let m = nodes.len();
    let fits = |mass: f64| (mass - theta).abs() <= tol;
    let mut best = f64::INFINITY;
    let mut best_set: Vec<(usize, usize)> = Vec::new();

    for i in 0..m {
        for j in i + 1..m {
            let mass1 = nodes[j].cdf - nodes[i].cdf;
            if mass1 > theta + tol {
                break;
            }
            let b1 = nodes[i].weight + nodes[j].weight;
            if fits(mass1) && b1 < best {
                best = b1;
                best_set = vec![(i, j)];
            }
            if max_components < 2 || b1 >= best {
                continue;
            }
            for k in j + 1..m {
                let b2 = b1 + nodes[k].weight;
                if b2 >= best {
                    continue;
                }
                // Endpoints l > k whose cdf puts the total mass in the window.
                let lo_cdf = theta - tol - mass1 + nodes[k].cdf;
                let hi_cdf = theta + tol - mass1 + nodes[k].cdf;
                let start = k + 1 + nodes[k + 1..].partition_point(|n| n.cdf < lo_cdf);
                for (l, node) in nodes.iter().enumerate().take(m).skip(start) {
                    if node.cdf > hi_cdf {
                        break;
                    }
                    let b = b2 + node.weight;
                    if b < best {
                        best = b;
                        best_set = vec![(i, j), (k, l)];
                    }
                }
            }
        }
    }
    if best_set.is_empty() {
        return Err(Error::Parameter(format!("no grid set has mass within {tol} of {theta}")));
    }
    let pieces: Vec<(f64, f64)> = best_set
        .iter()
        .map(|&(a, b)| (nodes[a].x.max(line.domain().lo()), nodes[b].x.min(line.domain().hi())))
        .collect();
    report(line, IntervalUnion::new(&pieces)?)
}
