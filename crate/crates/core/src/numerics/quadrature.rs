use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::FRAC_PI_2;

use super::{Interval, NumericResult, NumericsError, ToleranceConfig};

// 21-point Kronrod abscissae on [0, 1]; odd indices are the 10-point Gauss nodes.
const XGK: [f64; 11] = [
    0.995_657_163_025_808_1,
    0.973_906_528_517_171_7,
    0.930_157_491_355_708_2,
    0.865_063_366_688_984_5,
    0.780_817_726_586_416_9,
    0.679_409_568_299_024_4,
    0.562_757_134_668_604_7,
    0.433_395_394_129_247_2,
    0.294_392_862_701_460_2,
    0.148_874_338_981_631_2,
    0.0,
];

const WGK: [f64; 11] = [
    0.011_694_638_867_371_874,
    0.032_558_162_307_964_725,
    0.054_755_896_574_351_995,
    0.075_039_674_810_919_96,
    0.093_125_454_583_697_6,
    0.109_387_158_802_297_64,
    0.123_491_976_262_065_84,
    0.134_709_217_311_473_34,
    0.142_775_938_577_060_09,
    0.147_739_104_901_338_49,
    0.149_445_554_002_916_9,
];

const WG: [f64; 5] = [
    0.066_671_344_308_688_14,
    0.149_451_349_150_580_6,
    0.219_086_362_515_982_04,
    0.269_266_719_309_996_35,
    0.295_524_224_714_752_87,
];

struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error.total_cmp(&other.error) == Ordering::Equal
    }
}

impl Eq for Segment {}

impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        // Ties broken on position so the subdivision order is reproducible.
        self.error
            .total_cmp(&other.error)
            .then_with(|| other.a.total_cmp(&self.a))
    }
}

/// Integrand in the variable actually handed to the Kronrod rule, together
/// with the map back to the caller's variable for error reporting.
struct Mapped<F> {
    f: F,
    kind: MapKind,
}

#[derive(Clone, Copy)]
enum MapKind {
    Identity,
    /// s = tan(u) on (-pi/2, pi/2).
    Whole,
    /// s = origin + tan(u) on [0, pi/2) or (-pi/2, 0].
    Half { origin: f64 },
}

impl<F: Fn(f64) -> f64> Mapped<F> {
    fn eval(&self, u: f64) -> Result<f64, NumericsError> {
        let (s, jac) = match self.kind {
            MapKind::Identity => (u, 1.0),
            MapKind::Whole => {
                let t = u.tan();
                (t, 1.0 + t * t)
            }
            MapKind::Half { origin } => {
                let t = u.tan();
                (origin + t, 1.0 + t * t)
            }
        };
        let y = (self.f)(s);
        if y.is_nan() {
            return Err(NumericsError::NanIntegrand { at: s });
        }
        if y == 0.0 {
            return Ok(0.0);
        }
        Ok(y * jac)
    }
}

fn kronrod21<F: Fn(f64) -> f64>(
    g: &Mapped<F>,
    a: f64,
    b: f64,
) -> Result<(f64, f64), NumericsError> {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = g.eval(center)?;
    let mut resk = WGK[10] * fc;
    let mut resg = 0.0;
    let mut resabs = WGK[10] * fc.abs();
    let mut fv1 = [0.0; 10];
    let mut fv2 = [0.0; 10];
    for j in 0..10 {
        let dx = half * XGK[j];
        let f1 = g.eval(center - dx)?;
        let f2 = g.eval(center + dx)?;
        fv1[j] = f1;
        fv2[j] = f2;
        resk += WGK[j] * (f1 + f2);
        resabs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            resg += WG[j / 2] * (f1 + f2);
        }
    }
    let reskh = 0.5 * resk;
    let mut resasc = WGK[10] * (fc - reskh).abs();
    for j in 0..10 {
        resasc += WGK[j] * ((fv1[j] - reskh).abs() + (fv2[j] - reskh).abs());
    }
    let result = resk * half;
    let resabs = resabs * half.abs();
    let resasc = resasc * half.abs();
    let mut err = ((resk - resg) * half).abs();
    if resasc != 0.0 && err != 0.0 {
        err = resasc * (200.0 * err / resasc).powf(1.5).min(1.0);
    }
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * resabs);
    }
    Ok((result, err))
}

/// Adaptive Gauss–Kronrod (21 point) integration of `f` over `domain`.
///
/// Infinite endpoints are removed with `s = tan(u)` (whole line) or
/// `s = x0 + tan(u)` (half lines) before adaptive bisection. Convergence is
/// declared once the summed error estimate falls below
/// `max(abs_tol, rel_tol * |value|)`.
pub fn integrate<F: Fn(f64) -> f64>(
    f: F,
    domain: Interval,
    tol: &ToleranceConfig,
) -> Result<NumericResult, NumericsError> {
    let (kind, a, b) = match (domain.lo_is_infinite(), domain.hi_is_infinite()) {
        (false, false) => (MapKind::Identity, domain.lo(), domain.hi()),
        (true, true) => (MapKind::Whole, -FRAC_PI_2, FRAC_PI_2),
        (false, true) => (MapKind::Half { origin: domain.lo() }, 0.0, FRAC_PI_2),
        (true, false) => (MapKind::Half { origin: domain.hi() }, -FRAC_PI_2, 0.0),
    };
    let g = Mapped { f, kind };
    adaptive(&g, a, b, tol)
}

fn adaptive<F: Fn(f64) -> f64>(
    g: &Mapped<F>,
    a: f64,
    b: f64,
    tol: &ToleranceConfig,
) -> Result<NumericResult, NumericsError> {
    let (value, error) = kronrod21(g, a, b)?;
    let mut evaluations = 21;
    let mut heap = BinaryHeap::new();
    heap.push(Segment { a, b, value, error });
    // Segments too short to bisect further keep their contribution here.
    let mut frozen_value = 0.0;
    let mut frozen_error = 0.0;
    let mut running_value = value;
    let mut running_error = error;

    loop {
        if running_error <= tol.target(running_value) {
            // Re-sum exactly before declaring convergence.
            running_value = frozen_value + heap.iter().map(|s| s.value).sum::<f64>();
            running_error = frozen_error + heap.iter().map(|s| s.error).sum::<f64>();
            if running_error <= tol.target(running_value) {
                return Ok(NumericResult {
                    value: running_value,
                    error_estimate: running_error,
                    evaluations,
                });
            }
        }
        if evaluations + 42 > tol.max_evals {
            return Err(NumericsError::QuadratureNotConverged {
                value: running_value,
                error_estimate: running_error,
                evaluations,
            });
        }
        let Some(worst) = heap.pop() else {
            return Err(NumericsError::QuadratureNotConverged {
                value: running_value,
                error_estimate: running_error,
                evaluations,
            });
        };
        let mid = 0.5 * (worst.a + worst.b);
        let resolution = 64.0 * f64::EPSILON * (worst.a.abs() + worst.b.abs()).max(f64::MIN_POSITIVE);
        if worst.b - worst.a <= resolution || mid <= worst.a || mid >= worst.b {
            frozen_value += worst.value;
            frozen_error += worst.error;
            continue;
        }
        let (v1, e1) = kronrod21(g, worst.a, mid)?;
        let (v2, e2) = kronrod21(g, mid, worst.b)?;
        evaluations += 42;
        running_value += v1 + v2 - worst.value;
        running_error += e1 + e2 - worst.error;
        heap.push(Segment {
            a: worst.a,
            b: mid,
            value: v1,
            error: e1,
        });
        heap.push(Segment {
            a: mid,
            b: worst.b,
            value: v2,
            error: e2,
        });
    }
}
