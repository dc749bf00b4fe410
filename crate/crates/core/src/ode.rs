//! Dormand-Prince 8(5,3) integrator with 7th-order dense output.
//!
//! Step-size control and the dense-output construction follow Hairer's
//! `DOP853`. The state is a fixed-size real vector; complex systems are
//! split into real and imaginary parts by the caller.

use crate::error::{Error, Result};

/// A first-order system `dy/dt = f(t, y)`.
pub trait OdeSystem<const N: usize> {
    fn rhs(&self, t: f64, y: &[f64; N]) -> [f64; N];
}

impl<const N: usize, F> OdeSystem<N> for F
where
    F: Fn(f64, &[f64; N]) -> [f64; N],
{
    fn rhs(&self, t: f64, y: &[f64; N]) -> [f64; N] {
        self(t, y)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub rel: f64,
    pub abs: f64,
}

/// Counters reported after an integration.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Stats {
    pub accepted: usize,
    pub rejected: usize,
    pub evals: usize,
}

/// Result of one integration: final state and counters.
#[derive(Debug, Clone, Copy)]
pub struct Solution<const N: usize> {
    pub t: f64,
    pub y: [f64; N],
    pub stats: Stats,
}

const MAX_STEPS: usize = 50_000_000;
const SAFE: f64 = 0.9;
const FAC_MIN: f64 = 0.333;
const FAC_MAX: f64 = 6.0;
/// Local error target as a fraction of the requested tolerance, so that the
/// accumulated error over long windows stays near the request.
const LOCAL_TOL_FACTOR: f64 = 0.1;

#[inline]
fn axpy<const N: usize>(y: &[f64; N], h: f64, terms: &[(f64, &[f64; N])]) -> [f64; N] {
    let mut out = *y;
    for i in 0..N {
        let mut acc = 0.0;
        for (c, k) in terms {
            acc += c * k[i];
        }
        out[i] += h * acc;
    }
    out
}

#[inline]
fn lin<const N: usize>(terms: &[(f64, &[f64; N])]) -> [f64; N] {
    let mut out = [0.0; N];
    for i in 0..N {
        let mut acc = 0.0;
        for (c, k) in terms {
            acc += c * k[i];
        }
        out[i] = acc;
    }
    out
}

fn all_finite<const N: usize>(y: &[f64; N]) -> bool {
    y.iter().all(|v| v.is_finite())
}

/// Stages of one step, kept so a dense-output polynomial can be built on demand.
struct Step<const N: usize> {
    t: f64,
    h: f64,
    y0: [f64; N],
    y1: [f64; N],
    k: [[f64; N]; 12],
    f1: [f64; N],
}

/// Dense-output polynomial over one accepted step.
struct Dense<const N: usize> {
    t: f64,
    h: f64,
    c: [[f64; N]; 8],
}

impl<const N: usize> Dense<N> {
    fn build<S: OdeSystem<N>>(sys: &S, st: &Step<N>, stats: &mut Stats) -> Self {
        let k = &st.k;
        let h = st.h;
        let (k1, k6, k7, k8, k9, k10, k11, k12) =
            (&k[0], &k[5], &k[6], &k[7], &k[8], &k[9], &k[10], &k[11]);
        let f1 = &st.f1;
        let mut c = [[0.0; N]; 8];
        for i in 0..N {
            let ydiff = st.y1[i] - st.y0[i];
            let bspl = h * k1[i] - ydiff;
            c[0][i] = st.y0[i];
            c[1][i] = ydiff;
            c[2][i] = bspl;
            c[3][i] = ydiff - h * f1[i] - bspl;
        }
        let d = [
            [D41, D46, D47, D48, D49, D410, D411, D412],
            [D51, D56, D57, D58, D59, D510, D511, D512],
            [D61, D66, D67, D68, D69, D610, D611, D612],
            [D71, D76, D77, D78, D79, D710, D711, D712],
        ];
        for (row, dr) in d.iter().enumerate() {
            c[4 + row] = lin(&[
                (dr[0], k1),
                (dr[1], k6),
                (dr[2], k7),
                (dr[3], k8),
                (dr[4], k9),
                (dr[5], k10),
                (dr[6], k11),
                (dr[7], k12),
            ]);
        }
        let s14 = sys.rhs(
            st.t + C14 * h,
            &axpy(
                &st.y0,
                h,
                &[
                    (A141, k1),
                    (A147, k7),
                    (A148, k8),
                    (A149, k9),
                    (A1410, k10),
                    (A1411, k11),
                    (A1412, k12),
                    (A1413, f1),
                ],
            ),
        );
        let s15 = sys.rhs(
            st.t + C15 * h,
            &axpy(
                &st.y0,
                h,
                &[
                    (A151, k1),
                    (A156, k6),
                    (A157, k7),
                    (A158, k8),
                    (A1511, k11),
                    (A1512, k12),
                    (A1513, f1),
                    (A1514, &s14),
                ],
            ),
        );
        let s16 = sys.rhs(
            st.t + C16 * h,
            &axpy(
                &st.y0,
                h,
                &[
                    (A161, k1),
                    (A166, k6),
                    (A167, k7),
                    (A168, k8),
                    (A169, k9),
                    (A1613, f1),
                    (A1614, &s14),
                    (A1615, &s15),
                ],
            ),
        );
        stats.evals += 3;
        let tail = [
            [D413, D414, D415, D416],
            [D513, D514, D515, D516],
            [D613, D614, D615, D616],
            [D713, D714, D715, D716],
        ];
        for (row, dr) in tail.iter().enumerate() {
            let add = lin(&[(dr[0], f1), (dr[1], &s14), (dr[2], &s15), (dr[3], &s16)]);
            for i in 0..N {
                c[4 + row][i] = h * (c[4 + row][i] + add[i]);
            }
        }
        Dense { t: st.t, h, c }
    }

    fn eval(&self, t: f64) -> [f64; N] {
        let s = (t - self.t) / self.h;
        let s1 = 1.0 - s;
        let c = &self.c;
        let mut y = [0.0; N];
        for i in 0..N {
            let conpar = c[4][i] + (c[5][i] + (c[6][i] + c[7][i] * s) * s1) * s;
            y[i] = c[0][i] + (c[1][i] + (c[2][i] + (c[3][i] + conpar * s1) * s) * s1) * s;
        }
        y
    }
}

fn stages<const N: usize, S: OdeSystem<N>>(
    sys: &S,
    t: f64,
    y: &[f64; N],
    k1: &[f64; N],
    h: f64,
) -> ([[f64; N]; 12], [f64; N], [f64; N]) {
    let mut k = [[0.0; N]; 12];
    k[0] = *k1;
    k[1] = sys.rhs(t + C2 * h, &axpy(y, h, &[(A21, &k[0])]));
    k[2] = sys.rhs(t + C3 * h, &axpy(y, h, &[(A31, &k[0]), (A32, &k[1])]));
    k[3] = sys.rhs(t + C4 * h, &axpy(y, h, &[(A41, &k[0]), (A43, &k[2])]));
    k[4] = sys.rhs(
        t + C5 * h,
        &axpy(y, h, &[(A51, &k[0]), (A53, &k[2]), (A54, &k[3])]),
    );
    k[5] = sys.rhs(
        t + C6 * h,
        &axpy(y, h, &[(A61, &k[0]), (A64, &k[3]), (A65, &k[4])]),
    );
    k[6] = sys.rhs(
        t + C7 * h,
        &axpy(y, h, &[(A71, &k[0]), (A74, &k[3]), (A75, &k[4]), (A76, &k[5])]),
    );
    k[7] = sys.rhs(
        t + C8 * h,
        &axpy(
            y,
            h,
            &[(A81, &k[0]), (A84, &k[3]), (A85, &k[4]), (A86, &k[5]), (A87, &k[6])],
        ),
    );
    k[8] = sys.rhs(
        t + C9 * h,
        &axpy(
            y,
            h,
            &[
                (A91, &k[0]),
                (A94, &k[3]),
                (A95, &k[4]),
                (A96, &k[5]),
                (A97, &k[6]),
                (A98, &k[7]),
            ],
        ),
    );
    k[9] = sys.rhs(
        t + C10 * h,
        &axpy(
            y,
            h,
            &[
                (A101, &k[0]),
                (A104, &k[3]),
                (A105, &k[4]),
                (A106, &k[5]),
                (A107, &k[6]),
                (A108, &k[7]),
                (A109, &k[8]),
            ],
        ),
    );
    k[10] = sys.rhs(
        t + C11 * h,
        &axpy(
            y,
            h,
            &[
                (A111, &k[0]),
                (A114, &k[3]),
                (A115, &k[4]),
                (A116, &k[5]),
                (A117, &k[6]),
                (A118, &k[7]),
                (A119, &k[8]),
                (A1110, &k[9]),
            ],
        ),
    );
    k[11] = sys.rhs(
        t + h,
        &axpy(
            y,
            h,
            &[
                (A121, &k[0]),
                (A124, &k[3]),
                (A125, &k[4]),
                (A126, &k[5]),
                (A127, &k[6]),
                (A128, &k[7]),
                (A129, &k[8]),
                (A1210, &k[9]),
                (A1211, &k[10]),
            ],
        ),
    );
    let incr = lin(&[
        (B1, &k[0]),
        (B6, &k[5]),
        (B7, &k[6]),
        (B8, &k[7]),
        (B9, &k[8]),
        (B10, &k[9]),
        (B11, &k[10]),
        (B12, &k[11]),
    ]);
    let mut y1 = *y;
    for i in 0..N {
        y1[i] += h * incr[i];
    }
    (k, incr, y1)
}

fn initial_step<const N: usize, S: OdeSystem<N>>(
    sys: &S,
    t: f64,
    y: &[f64; N],
    f0: &[f64; N],
    span: f64,
    tol: Tolerances,
) -> f64 {
    let sk = |i: usize| tol.abs + tol.rel * y[i].abs();
    let mut dnf = 0.0;
    let mut dny = 0.0;
    for i in 0..N {
        dnf += (f0[i] / sk(i)).powi(2);
        dny += (y[i] / sk(i)).powi(2);
    }
    let mut h = if dnf <= 1e-10 || dny <= 1e-10 {
        1e-6
    } else {
        0.01 * (dny / dnf).sqrt()
    };
    h = h.min(span);
    let y1 = axpy(y, h, &[(1.0, f0)]);
    let f1 = sys.rhs(t + h, &y1);
    let mut der2 = 0.0;
    for i in 0..N {
        der2 += ((f1[i] - f0[i]) / sk(i)).powi(2);
    }
    let der2 = der2.sqrt() / h;
    let der12 = der2.max(dnf.sqrt());
    let h1 = if der12 <= 1e-15 {
        (h * 1e-3).max(1e-6)
    } else {
        (0.01 / der12).powf(1.0 / 8.0)
    };
    (100.0 * h).min(h1).min(span)
}

/// Integrates `sys` from `t0` to `t_end` with adaptive step control.
///
/// `samples` must be non-decreasing and lie in `[t0, t_end]`; `on_sample` is
/// called once per sample with the dense-output state. Samples equal to `t0`
/// report `y0` and samples equal to `t_end` report the final state exactly.
pub fn integrate<const N: usize, S, F>(
    sys: &S,
    t0: f64,
    y0: [f64; N],
    t_end: f64,
    tol: Tolerances,
    samples: &[f64],
    mut on_sample: F,
) -> Result<Solution<N>>
where
    S: OdeSystem<N>,
    F: FnMut(usize, f64, &[f64; N]),
{
    if !(t_end > t0) || !t0.is_finite() || !t_end.is_finite() {
        return Err(Error::invalid(format!(
            "integration interval [{t0}, {t_end}] is empty or non-finite"
        )));
    }
    if !all_finite(&y0) {
        return Err(Error::invalid("initial state is not finite"));
    }
    let span = t_end - t0;
    let mut stats = Stats::default();
    let mut t = t0;
    let mut y = y0;
    let mut f = sys.rhs(t, &y);
    stats.evals += 1;
    let mut h = initial_step(sys, t, &y, &f, span, tol);
    stats.evals += 1;
    let h_min = 1e-14 * span.max(t0.abs()).max(t_end.abs());
    let mut next_sample = 0usize;
    while next_sample < samples.len() && samples[next_sample] <= t0 {
        on_sample(next_sample, samples[next_sample], &y);
        next_sample += 1;
    }
    let mut last_rejected = false;

    loop {
        if stats.accepted + stats.rejected > MAX_STEPS {
            return Err(Error::Stiffness { t });
        }
        let last = t + 1.01 * h >= t_end;
        if last {
            h = t_end - t;
        }
        if h < h_min {
            return Err(Error::Stiffness { t });
        }
        let (k, incr, y1) = stages(sys, t, &y, &f, h);
        stats.evals += 11;

        let mut err = 0.0;
        let mut err2 = 0.0;
        for i in 0..N {
            let sk = LOCAL_TOL_FACTOR * (tol.abs + tol.rel * y[i].abs().max(y1[i].abs()));
            let e2 = incr[i] - BHH1 * k[0][i] - BHH2 * k[8][i] - BHH3 * k[11][i];
            err2 += (e2 / sk).powi(2);
            let e = ER1 * k[0][i]
                + ER6 * k[5][i]
                + ER7 * k[6][i]
                + ER8 * k[7][i]
                + ER9 * k[8][i]
                + ER10 * k[9][i]
                + ER11 * k[10][i]
                + ER12 * k[11][i];
            err += (e / sk).powi(2);
        }
        let mut deno = err + 0.01 * err2;
        if deno <= 0.0 {
            deno = 1.0;
        }
        let err = h * err * (1.0 / (deno * N as f64)).sqrt();
        if !err.is_finite() {
            // Overflowed stages: retry with a much smaller step.
            h *= 0.1;
            stats.rejected += 1;
            last_rejected = true;
            continue;
        }
        let fac11 = err.powf(0.125);
        let fac = (1.0 / FAC_MAX).max((1.0 / FAC_MIN).min(fac11 / SAFE));
        let mut h_new = h / fac;

        if err <= 1.0 {
            stats.accepted += 1;
            let t1 = if last { t_end } else { t + h };
            let f1 = sys.rhs(t1, &y1);
            stats.evals += 1;
            if !all_finite(&y1) {
                return Err(Error::Stiffness { t });
            }
            if next_sample < samples.len() && samples[next_sample] <= t1 {
                let step = Step {
                    t,
                    h,
                    y0: y,
                    y1,
                    k,
                    f1,
                };
                let dense = Dense::build(sys, &step, &mut stats);
                while next_sample < samples.len() && samples[next_sample] <= t1 {
                    let ts = samples[next_sample];
                    let ys = if last && ts >= t_end { y1 } else { dense.eval(ts) };
                    on_sample(next_sample, ts, &ys);
                    next_sample += 1;
                }
            }
            t = t1;
            y = y1;
            f = f1;
            if last {
                break;
            }
            if last_rejected {
                h_new = h_new.min(h);
            }
            last_rejected = false;
        } else {
            h_new = h / (1.0 / FAC_MIN).min(fac11 / SAFE);
            stats.rejected += 1;
            last_rejected = true;
        }
        h = h_new;
    }
    Ok(Solution { t, y, stats })
}

/// Takes `n` equal DOP853 steps without error control.
pub fn integrate_fixed<const N: usize, S: OdeSystem<N>>(
    sys: &S,
    t0: f64,
    y0: [f64; N],
    t_end: f64,
    n: usize,
) -> [f64; N] {
    let h = (t_end - t0) / n as f64;
    let mut y = y0;
    for i in 0..n {
        let t = t0 + i as f64 * h;
        let f = sys.rhs(t, &y);
        let (_, _, y1) = stages(sys, t, &y, &f, h);
        y = y1;
    }
    y
}

const C2: f64 = 0.526001519587677318785587544488E-01;
const C3: f64 = 0.789002279381515978178381316732E-01;
const C4: f64 = 0.118350341907227396726757197510E+00;
const C5: f64 = 0.281649658092772603273242802490E+00;
const C6: f64 = 0.333333333333333333333333333333E+00;
const C7: f64 = 0.25E+00;
const C8: f64 = 0.307692307692307692307692307692E+00;
const C9: f64 = 0.651282051282051282051282051282E+00;
const C10: f64 = 0.6E+00;
const C11: f64 = 0.857142857142857142857142857142E+00;
const C14: f64 = 0.1E+00;
const C15: f64 = 0.2E+00;
const C16: f64 = 0.777777777777777777777777777778E+00;

const A21: f64 = 5.26001519587677318785587544488E-2;
const A31: f64 = 1.97250569845378994544595329183E-2;
const A32: f64 = 5.91751709536136983633785987549E-2;
const A41: f64 = 2.95875854768068491816892993775E-2;
const A43: f64 = 8.87627564304205475450678981324E-2;
const A51: f64 = 2.41365134159266685502369798665E-1;
const A53: f64 = -8.84549479328286085344864962717E-1;
const A54: f64 = 9.24834003261792003115737966543E-1;
const A61: f64 = 3.7037037037037037037037037037E-2;
const A64: f64 = 1.70828608729473871279604482173E-1;
const A65: f64 = 1.25467687566822425016691814123E-1;
const A71: f64 = 3.7109375E-2;
const A74: f64 = 1.70252211019544039314978060272E-1;
const A75: f64 = 6.02165389804559606850219397283E-2;
const A76: f64 = -1.7578125E-2;
const A81: f64 = 3.70920001185047927108779319836E-2;
const A84: f64 = 1.70383925712239993810214054705E-1;
const A85: f64 = 1.07262030446373284651809199168E-1;
const A86: f64 = -1.53194377486244017527936158236E-2;
const A87: f64 = 8.27378916381402288758473766002E-3;
const A91: f64 = 6.24110958716075717114429577812E-1;
const A94: f64 = -3.36089262944694129406857109825E0;
const A95: f64 = -8.68219346841726006818189891453E-1;
const A96: f64 = 2.75920996994467083049415600797E1;
const A97: f64 = 2.01540675504778934086186788979E1;
const A98: f64 = -4.34898841810699588477366255144E1;
const A101: f64 = 4.77662536438264365890433908527E-1;
const A104: f64 = -2.48811461997166764192642586468E0;
const A105: f64 = -5.90290826836842996371446475743E-1;
const A106: f64 = 2.12300514481811942347288949897E1;
const A107: f64 = 1.52792336328824235832596922938E1;
const A108: f64 = -3.32882109689848629194453265587E1;
const A109: f64 = -2.03312017085086261358222928593E-2;
const A111: f64 = -9.3714243008598732571704021658E-1;
const A114: f64 = 5.18637242884406370830023853209E0;
const A115: f64 = 1.09143734899672957818500254654E0;
const A116: f64 = -8.14978701074692612513997267357E0;
const A117: f64 = -1.85200656599969598641566180701E1;
const A118: f64 = 2.27394870993505042818970056734E1;
const A119: f64 = 2.49360555267965238987089396762E0;
const A1110: f64 = -3.0467644718982195003823669022E0;
const A121: f64 = 2.27331014751653820792359768449E0;
const A124: f64 = -1.05344954667372501984066689879E1;
const A125: f64 = -2.00087205822486249909675718444E0;
const A126: f64 = -1.79589318631187989172765950534E1;
const A127: f64 = 2.79488845294199600508499808837E1;
const A128: f64 = -2.85899827713502369474065508674E0;
const A129: f64 = -8.87285693353062954433549289258E0;
const A1210: f64 = 1.23605671757943030647266201528E1;
const A1211: f64 = 6.43392746015763530355970484046E-1;
const A141: f64 = 5.61675022830479523392909219681E-2;
const A147: f64 = 2.53500210216624811088794765333E-1;
const A148: f64 = -2.46239037470802489917441475441E-1;
const A149: f64 = -1.24191423263816360469010140626E-1;
const A1410: f64 = 1.5329179827876569731206322685E-1;
const A1411: f64 = 8.20105229563468988491666602057E-3;
const A1412: f64 = 7.56789766054569976138603589584E-3;
const A1413: f64 = -8.298E-3;
const A151: f64 = 3.18346481635021405060768473261E-2;
const A156: f64 = 2.83009096723667755288322961402E-2;
const A157: f64 = 5.35419883074385676223797384372E-2;
const A158: f64 = -5.49237485713909884646569340306E-2;
const A1511: f64 = -1.08347328697249322858509316994E-4;
const A1512: f64 = 3.82571090835658412954920192323E-4;
const A1513: f64 = -3.40465008687404560802977114492E-4;
const A1514: f64 = 1.41312443674632500278074618366E-1;
const A161: f64 = -4.28896301583791923408573538692E-1;
const A166: f64 = -4.69762141536116384314449447206E0;
const A167: f64 = 7.68342119606259904184240953878E0;
const A168: f64 = 4.06898981839711007970213554331E0;
const A169: f64 = 3.56727187455281109270669543021E-1;
const A1613: f64 = -1.39902416515901462129418009734E-3;
const A1614: f64 = 2.9475147891527723389556272149E0;
const A1615: f64 = -9.15095847217987001081870187138E0;

const B1: f64 = 5.42937341165687622380535766363E-2;
const B6: f64 = 4.45031289275240888144113950566E0;
const B7: f64 = 1.89151789931450038304281599044E0;
const B8: f64 = -5.8012039600105847814672114227E0;
const B9: f64 = 3.1116436695781989440891606237E-1;
const B10: f64 = -1.52160949662516078556178806805E-1;
const B11: f64 = 2.01365400804030348374776537501E-1;
const B12: f64 = 4.47106157277725905176885569043E-2;

const BHH1: f64 = 0.244094488188976377952755905512E+00;
const BHH2: f64 = 0.733846688281611857341361741547E+00;
const BHH3: f64 = 0.220588235294117647058823529412E-01;

const ER1: f64 = 0.1312004499419488073250102996E-01;
const ER6: f64 = -0.1225156446376204440720569753E+01;
const ER7: f64 = -0.4957589496572501915214079952E+00;
const ER8: f64 = 0.1664377182454986536961530415E+01;
const ER9: f64 = -0.3503288487499736816886487290E+00;
const ER10: f64 = 0.3341791187130174790297318841E+00;
const ER11: f64 = 0.8192320648511571246570742613E-01;
const ER12: f64 = -0.2235530786388629525884427845E-01;

const D41: f64 = -0.84289382761090128651353491142E+01;
const D46: f64 = 0.56671495351937776962531783590E+00;
const D47: f64 = -0.30689499459498916912797304727E+01;
const D48: f64 = 0.23846676565120698287728149680E+01;
const D49: f64 = 0.21170345824450282767155149946E+01;
const D410: f64 = -0.87139158377797299206789907490E+00;
const D411: f64 = 0.22404374302607882758541771650E+01;
const D412: f64 = 0.63157877876946881815570249290E+00;
const D413: f64 = -0.88990336451333310820698117400E-01;
const D414: f64 = 0.18148505520854727256656404962E+02;
const D415: f64 = -0.91946323924783554000451984436E+01;
const D416: f64 = -0.44360363875948939664310572000E+01;
const D51: f64 = 0.10427508642579134603413151009E+02;
const D56: f64 = 0.24228349177525818288430175319E+03;
const D57: f64 = 0.16520045171727028198505394887E+03;
const D58: f64 = -0.37454675472269020279518312152E+03;
const D59: f64 = -0.22113666853125306036270938578E+02;
const D510: f64 = 0.77334326684722638389603898808E+01;
const D511: f64 = -0.30674084731089398182061213626E+02;
const D512: f64 = -0.93321305264302278729567221706E+01;
const D513: f64 = 0.15697238121770843886131091075E+02;
const D514: f64 = -0.31139403219565177677282850411E+02;
const D515: f64 = -0.93529243588444783865713862664E+01;
const D516: f64 = 0.35816841486394083752465898540E+02;
const D61: f64 = 0.19985053242002433820987653617E+02;
const D66: f64 = -0.38703730874935176555105901742E+03;
const D67: f64 = -0.18917813819516756882830838328E+03;
const D68: f64 = 0.52780815920542364900561016686E+03;
const D69: f64 = -0.11573902539959630126141871134E+02;
const D610: f64 = 0.68812326946963000169666922661E+01;
const D611: f64 = -0.10006050966910838403183860980E+01;
const D612: f64 = 0.77771377980534432092869265740E+00;
const D613: f64 = -0.27782057523535084065932004339E+01;
const D614: f64 = -0.60196695231264120758267380846E+02;
const D615: f64 = 0.84320405506677161018159903784E+02;
const D616: f64 = 0.11992291136182789328035130030E+02;
const D71: f64 = -0.25693933462703749003312586129E+02;
const D76: f64 = -0.15418974869023643374053993627E+03;
const D77: f64 = -0.23152937917604549567536039109E+03;
const D78: f64 = 0.35763911791061412378285349910E+03;
const D79: f64 = 0.93405324183624310003907691704E+02;
const D710: f64 = -0.37458323136451633156875139351E+02;
const D711: f64 = 0.10409964950896230045147246184E+03;
const D712: f64 = 0.29840293426660503123344363579E+02;
const D713: f64 = -0.43533456590011143754432175058E+02;
const D714: f64 = 0.96324553959188282948394950600E+02;
const D715: f64 = -0.39177261675615439165231486172E+02;
const D716: f64 = -0.14972683625798562581422125276E+03;
