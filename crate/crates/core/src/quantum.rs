//! Explicit qubit models: a pure `n`-qubit state and one projective `±1`
//! measurement per party and input.
//!
//! Floating point is confined to this module. [`FloatBehavior::to_rational`]
//! bridges back to exact behaviors.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, FRAC_PI_4, FRAC_PI_6, PI};

use num_complex::Complex64;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::behavior::Behavior;
use crate::error::{Error, Result};
use crate::functional::BellFunctional;
use crate::game::SvetlichnyGame;
use crate::ns_lp;
use crate::rational::{int, inv_pow2, round_to_denominator, Rational};

/// Largest party count a model may have.
pub const QUANTUM_MAX_PARTIES: usize = 6;
/// Largest party count [`angle_search`] accepts.
pub const SEARCH_MAX_PARTIES: usize = 4;

const NORM_TOLERANCE: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerance {
    eps: f64,
}

impl Tolerance {
    pub fn new(eps: f64) -> Result<Self> {
        if eps > 0.0 && eps.is_finite() {
            Ok(Self { eps })
        } else {
            Err(Error::Domain(format!("tolerance must be positive, got {eps}")))
        }
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Self { eps: 1e-9 }
    }
}

/// Measurement direction on the Bloch sphere: observable
/// `cos(theta) Z + sin(theta) (cos(phi) X + sin(phi) Y)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Setting {
    pub theta: f64,
    pub phi: f64,
}

impl Setting {
    pub fn equatorial(phi: f64) -> Self {
        Self { theta: FRAC_PI_2, phi }
    }

    pub fn z() -> Self {
        Self { theta: 0.0, phi: 0.0 }
    }

    /// Eigenvectors for eigenvalue `+1` (output 0) and `-1` (output 1).
    fn eigenvectors(&self) -> [[Complex64; 2]; 2] {
        let (c, s) = ((self.theta / 2.0).cos(), (self.theta / 2.0).sin());
        let e = Complex64::from_polar(1.0, self.phi);
        [[Complex64::new(c, 0.0), e * s], [-e.conj() * s, Complex64::new(c, 0.0)]]
    }

    /// The 2x2 observable, row major.
    pub fn observable(&self) -> [[Complex64; 2]; 2] {
        let (ct, st) = (self.theta.cos(), self.theta.sin());
        let e = Complex64::from_polar(st, self.phi);
        [[Complex64::new(ct, 0.0), e.conj()], [e, Complex64::new(-ct, 0.0)]]
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct QuantumModel {
    n: usize,
    state: Vec<Complex64>,
    /// `settings[party][input]`.
    settings: Vec<[Setting; 2]>,
}

impl QuantumModel {
    pub fn new(state: Vec<Complex64>, settings: Vec<[Setting; 2]>) -> Result<Self> {
        let n = settings.len();
        if n == 0 || n > QUANTUM_MAX_PARTIES {
            return Err(Error::Capacity { what: "quantum model", n, max: QUANTUM_MAX_PARTIES });
        }
        if state.len() != 1 << n {
            return Err(Error::InvalidModel(format!(
                "state has {} amplitudes, {n} parties need {}",
                state.len(),
                1usize << n
            )));
        }
        let norm: f64 = state.iter().map(|a| a.norm_sqr()).sum();
        if !norm.is_finite() || (norm - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::InvalidModel(format!("state norm squared is {norm}, expected 1")));
        }
        for (party, pair) in settings.iter().enumerate() {
            for s in pair {
                if !s.theta.is_finite() || !s.phi.is_finite() {
                    return Err(Error::InvalidModel(format!("non-finite angle for party {}", party + 1)));
                }
            }
        }
        Ok(Self { n, state, settings })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn state(&self) -> &[Complex64] {
        &self.state
    }

    pub fn settings(&self) -> &[[Setting; 2]] {
        &self.settings
    }
}

/// Float-valued behavior produced by a quantum model, same layout as
/// [`Behavior`].
#[derive(Clone, Debug, PartialEq)]
pub struct FloatBehavior {
    n: usize,
    table: Vec<f64>,
}

impl FloatBehavior {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn table(&self) -> &[f64] {
        &self.table
    }

    pub fn value(&self, f: &BellFunctional) -> Result<f64> {
        if f.n() != self.n {
            return Err(Error::Dimension(format!("functional has {} parties, behavior {}", f.n(), self.n)));
        }
        f.evaluate_f64(&self.table)
    }

    /// Largest deviation from per-input normalization.
    pub fn normalization_residual(&self) -> f64 {
        let size = 1usize << self.n;
        (0..size)
            .map(|i| ((0..size).map(|o| self.table[o * size + i]).sum::<f64>() - 1.0).abs())
            .fold(0.0, f64::max)
    }

    /// Largest violation of single-party no-signaling.
    pub fn no_signaling_residual(&self) -> f64 {
        let size = 1usize << self.n;
        let mut worst = 0.0f64;
        for party in 0..self.n {
            let pbit = 1usize << party;
            for out in (0..size).filter(|o| o & pbit == 0) {
                for inp in (0..size).filter(|i| i & pbit == 0) {
                    let m = |input: usize| self.table[out * size + input] + self.table[(out | pbit) * size + input];
                    worst = worst.max((m(inp) - m(inp | pbit)).abs());
                }
            }
        }
        worst
    }

    pub fn min_entry(&self) -> f64 {
        self.table.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Largest gap between the joint and the product of single-party
    /// marginals.
    pub fn product_residual(&self) -> f64 {
        let size = 1usize << self.n;
        let mut worst = 0.0f64;
        for inp in 0..size {
            let marginals: Vec<f64> = (0..self.n)
                .map(|p| (0..size).filter(|o| o >> p & 1 == 0).map(|o| self.table[o * size + inp]).sum())
                .collect();
            for o in 0..size {
                let prod: f64 =
                    (0..self.n).map(|p| if o >> p & 1 == 0 { marginals[p] } else { 1.0 - marginals[p] }).product();
                worst = worst.max((prod - self.table[o * size + inp]).abs());
            }
        }
        worst
    }

    /// Exact behavior close to this one: entries rounded to multiples of
    /// `1 / denominator`, projected onto the no-signaling affine hull, and mixed
    /// with the least uniform noise that clears negative entries.
    pub fn to_rational(&self, denominator: i64) -> Result<Behavior> {
        let rounded: Vec<Rational> = self.table.iter().map(|&v| round_to_denominator(v, denominator)).collect();
        let projected = ns_lp::project_to_no_signaling(self.n, &rounded)?;
        let u = inv_pow2(self.n);
        let mut lambda = Rational::zero();
        for e in projected.iter().filter(|e| e.is_negative()) {
            let need = -e / (&u - e);
            if need > lambda {
                lambda = need;
            }
        }
        let keep = int(1) - &lambda;
        let table = projected.iter().map(|e| e * &keep + &lambda * &u).collect();
        Behavior::new(self.n, table)
    }
}

/// `P(x | X) = |<e_x1 ... e_xn | psi>|^2` for every input and output.
pub fn behavior_from_model(model: &QuantumModel) -> FloatBehavior {
    let n = model.n;
    let size = 1usize << n;
    let mut table = vec![0.0; size * size];
    for input in 0..size {
        let mut amp = model.state.clone();
        for party in 0..n {
            let setting = model.settings[party][input >> party & 1];
            let e = setting.eigenvectors();
            let bit = 1usize << party;
            for base in (0..size).filter(|b| b & bit == 0) {
                let (a0, a1) = (amp[base], amp[base | bit]);
                amp[base] = e[0][0].conj() * a0 + e[0][1].conj() * a1;
                amp[base | bit] = e[1][0].conj() * a0 + e[1][1].conj() * a1;
            }
        }
        for (output, a) in amp.iter().enumerate() {
            table[output * size + input] = a.norm_sqr();
        }
    }
    FloatBehavior { n, table }
}

/// `(|0...0> + |1...1>) / sqrt(2)`.
pub fn ghz(n: usize) -> Result<Vec<Complex64>> {
    if !(2..=QUANTUM_MAX_PARTIES).contains(&n) {
        return Err(Error::Domain(format!("GHZ state needs 2..={QUANTUM_MAX_PARTIES} parties, got {n}")));
    }
    let mut v = vec![Complex64::zero(); 1 << n];
    let a = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    v[0] = a;
    v[(1 << n) - 1] = a;
    Ok(v)
}

/// `|0...0>`.
pub fn product_zero(n: usize) -> Vec<Complex64> {
    let mut v = vec![Complex64::zero(); 1 << n];
    v[0] = Complex64::new(1.0, 0.0);
    v
}

/// Equatorial settings under which the GHZ state's correlator
/// `cos(sum of angles)` tracks the game's winning parity as closely as
/// possible, reaching `(2 + sqrt 2) / 4`.
pub fn svetlichny_settings(game: &SvetlichnyGame) -> Vec<[Setting; 2]> {
    let n = game.n();
    let c = game.c();
    (0..n)
        .map(|i| {
            let offset = if i == 0 { -FRAC_PI_4 + c[0] as f64 * PI } else { 0.0 };
            let step = FRAC_PI_2 + c[i + 1] as f64 * PI;
            [Setting::equatorial(offset), Setting::equatorial(offset + step)]
        })
        .collect()
}

/// [`svetlichny_settings`] for the all-zero coefficient game.
pub fn optimal_svetlichny_settings(n: usize) -> Result<Vec<[Setting; 2]>> {
    if n < 2 {
        return Err(Error::Domain(format!("need at least 2 parties, got {n}")));
    }
    Ok(svetlichny_settings(&SvetlichnyGame::canonical(n)?))
}

/// Settings for the three-party facet `<100> + <010> + <001> - <111>`
/// reaching its algebraic maximum 4 on GHZ.
pub fn mermin_facet_settings() -> Vec<[Setting; 2]> {
    vec![[Setting::equatorial(-FRAC_PI_6), Setting::equatorial(FRAC_PI_3)]; 3]
}

/// Names of the bundled models.
pub const BUILTIN_MODELS: [&str; 4] = ["ghz3-svetlichny", "ghz3-mermin", "ghz3-x", "product3-z"];

pub fn builtin_model(name: &str) -> Result<QuantumModel> {
    match name {
        "ghz3-svetlichny" => QuantumModel::new(ghz(3)?, optimal_svetlichny_settings(3)?),
        "ghz3-mermin" => QuantumModel::new(ghz(3)?, mermin_facet_settings()),
        "ghz3-x" => QuantumModel::new(ghz(3)?, vec![[Setting::equatorial(0.0); 2]; 3]),
        "product3-z" => QuantumModel::new(product_zero(3), vec![[Setting::z(); 2]; 3]),
        other => Err(Error::Parse(format!("unknown model {other:?}; known: {}", BUILTIN_MODELS.join(", ")))),
    }
}

/// Bundled model whose value on the named built-in game is the reference
/// quantum value, when one exists.
pub fn model_for_game(name: &str) -> Option<QuantumModel> {
    let model = match name {
        "mf3" => builtin_model("ghz3-mermin"),
        "mi3" | "mii3" => builtin_model("ghz3-x"),
        "gyni3" => builtin_model("product3-z"),
        _ => {
            let game = crate::catalog::parse_svetlichny(name).ok()?;
            if game.n() < 2 {
                return None;
            }
            let state = ghz(game.n()).ok()?;
            QuantumModel::new(state, svetlichny_settings(&game))
        }
    };
    model.ok()
}

/// Best value found, with its equatorial angles `angles[party][input]`.
#[derive(Clone, Debug, PartialEq)]
pub struct SearchResult {
    pub value: f64,
    pub angles: Vec<[f64; 2]>,
}

impl SearchResult {
    pub fn settings(&self) -> Vec<[Setting; 2]> {
        self.angles.iter().map(|a| [Setting::equatorial(a[0]), Setting::equatorial(a[1])]).collect()
    }
}

const SEARCH_STARTS: usize = 24;
const SEARCH_SEED: u64 = 0x5eed;

/// Maximizes `f` over equatorial settings on a fixed state: coordinate
/// scans over `grid_density` angles per party-input from several starts,
/// then coordinate descent with shrinking steps. Deterministic.
pub fn angle_search(f: &BellFunctional, state: &[Complex64], grid_density: usize) -> Result<SearchResult> {
    let n = f.n();
    if n == 0 || n > SEARCH_MAX_PARTIES {
        return Err(Error::Capacity { what: "angle search", n, max: SEARCH_MAX_PARTIES });
    }
    if grid_density < 2 {
        return Err(Error::Domain(format!("grid density must be at least 2, got {grid_density}")));
    }
    // validates the state once
    QuantumModel::new(state.to_vec(), vec![[Setting::z(); 2]; n])?;
    let eval = |angles: &[f64]| -> f64 {
        let settings = angles.chunks(2).map(|a| [Setting::equatorial(a[0]), Setting::equatorial(a[1])]).collect();
        let model = QuantumModel { n, state: state.to_vec(), settings };
        f.evaluate_f64(&behavior_from_model(&model).table).unwrap_or(f64::NEG_INFINITY)
    };
    let dims = 2 * n;
    let mut rng = ChaCha8Rng::seed_from_u64(SEARCH_SEED);
    let mut starts = vec![vec![0.0; dims]];
    while starts.len() < SEARCH_STARTS {
        starts.push((0..dims).map(|_| rng.random_range(0.0..2.0 * PI)).collect());
    }
    let best = starts
        .into_par_iter()
        .map(|mut x| {
            let mut value = eval(&x);
            let grid: Vec<f64> = (0..grid_density).map(|k| 2.0 * PI * k as f64 / grid_density as f64).collect();
            for _ in 0..3 {
                for d in 0..dims {
                    for &g in &grid {
                        let old = x[d];
                        x[d] = g;
                        let v = eval(&x);
                        if v > value {
                            value = v;
                        } else {
                            x[d] = old;
                        }
                    }
                }
            }
            let mut step = 2.0 * PI / grid_density as f64;
            while step > 1e-10 {
                let mut improved = false;
                for d in 0..dims {
                    for delta in [step, -step] {
                        let old = x[d];
                        x[d] = old + delta;
                        let v = eval(&x);
                        if v > value + 1e-15 {
                            value = v;
                            improved = true;
                        } else {
                            x[d] = old;
                        }
                    }
                }
                if !improved {
                    step /= 2.0;
                }
            }
            (value, x)
        })
        .reduce_with(|a, b| if b.0 > a.0 { b } else { a })
        .expect("at least one start");
    let angles = best.1.chunks(2).map(|a| [a[0].rem_euclid(2.0 * PI), a[1].rem_euclid(2.0 * PI)]).collect();
    Ok(SearchResult { value: best.0, angles })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::game::enumerate_games;

    const TSIRELSON: f64 = 0.853_553_390_593_273_8;

    fn assert_close(a: f64, b: f64, eps: f64) {
        assert!((a - b).abs() <= eps, "{a} vs {b}");
    }

    #[test]
    fn observables_are_pauli_like() {
        for (theta, phi) in [(0.3, 1.1), (FRAC_PI_2, -0.7), (2.5, 4.0)] {
            let s = Setting { theta, phi };
            let m = s.observable();
            assert_close((m[0][0] + m[1][1]).norm(), 0.0, 1e-12);
            assert_close((m[0][1] - m[1][0].conj()).norm(), 0.0, 1e-12);
            let e = s.eigenvectors();
            for (k, sign) in [(0usize, 1.0), (1, -1.0)] {
                for r in 0..2 {
                    let mv = m[r][0] * e[k][0] + m[r][1] * e[k][1];
                    assert_close((mv - e[k][r] * sign).norm(), 0.0, 1e-12);
                }
            }
        }
    }

    #[test]
    fn ghz_state() {
        let g = ghz(3).unwrap();
        assert_close(g[0].re, std::f64::consts::FRAC_1_SQRT_2, 1e-15);
        assert_close(g[7].re, std::f64::consts::FRAC_1_SQRT_2, 1e-15);
        assert!(g[1..7].iter().all(|a| a.norm() == 0.0));
        assert_close(g.iter().map(|a| a.norm_sqr()).sum(), 1.0, 1e-15);
        assert!(ghz(1).is_err());
    }

    #[test]
    fn product_state_gives_zero_box() {
        let b = behavior_from_model(&builtin_model("product3-z").unwrap());
        let expected = (0..64).map(|k| if k < 8 { 1.0 } else { 0.0 });
        for (got, want) in b.table().iter().zip(expected) {
            assert_close(*got, want, 1e-12);
        }
        assert_close(b.value(&catalog::gyni3()).unwrap(), 0.25, 1e-12);
    }

    #[test]
    fn svetlichny_values_on_ghz() {
        for n in 2..=5 {
            for game in enumerate_games(n).unwrap() {
                let m = QuantumModel::new(ghz(n).unwrap(), svetlichny_settings(&game)).unwrap();
                let b = behavior_from_model(&m);
                assert_close(b.value(&game.to_functional()).unwrap(), TSIRELSON, 1e-9);
                assert!(b.no_signaling_residual() < 1e-9 && b.normalization_residual() < 1e-9);
            }
        }
    }

    #[test]
    fn catalog_quantum_values() {
        let v = |model: &str, f: BellFunctional| behavior_from_model(&builtin_model(model).unwrap()).value(&f).unwrap();
        assert_close(v("ghz3-mermin", catalog::mermin_facet()), 4.0, 1e-9);
        assert_close(v("ghz3-x", catalog::mermin1()), 0.875, 1e-9);
        assert_close(v("ghz3-x", catalog::mermin2()), 0.75, 1e-9);
        // equatorial X/Y settings miss this sign pattern entirely
        let xy = QuantumModel::new(ghz(3).unwrap(), vec![[Setting::equatorial(0.0), Setting::equatorial(FRAC_PI_2)]; 3]);
        assert_close(behavior_from_model(&xy.unwrap()).value(&catalog::mermin_facet()).unwrap(), 0.0, 1e-9);
        assert!(model_for_game("ip3").is_none());
        assert!(model_for_game("svetlichny:3:0110").is_some());
    }

    #[test]
    fn invalid_models() {
        let bad = vec![Complex64::new(1.0, 0.0); 8];
        assert!(matches!(QuantumModel::new(bad, vec![[Setting::z(); 2]; 3]), Err(Error::InvalidModel(_))));
        assert!(matches!(QuantumModel::new(ghz(3).unwrap(), vec![[Setting::z(); 2]; 2]), Err(Error::InvalidModel(_))));
        assert!(Tolerance::new(0.0).is_err());
        assert_eq!(Tolerance::default().eps(), 1e-9);
    }

    #[test]
    fn search_lower_bounds() {
        let chsh = angle_search(&catalog::chsh(), &ghz(2).unwrap(), 16).unwrap();
        assert!(chsh.value >= TSIRELSON - 1e-6, "{}", chsh.value);
        let mi3 = angle_search(&catalog::mermin1(), &ghz(3).unwrap(), 8).unwrap();
        assert_close(mi3.value, 0.875, 1e-9);
        let gyni = angle_search(&catalog::gyni3(), &ghz(3).unwrap(), 8).unwrap();
        assert!(gyni.value <= 0.25 + 1e-9, "{}", gyni.value);
    }

    #[test]
    fn rational_bridge() {
        let model = builtin_model("ghz3-svetlichny").unwrap();
        let fb = behavior_from_model(&model);
        let exact = fb.to_rational(1_000_000_000).unwrap();
        assert!(exact.is_fully_no_signaling());
        let s3 = SvetlichnyGame::canonical(3).unwrap().to_functional();
        let diff = crate::rational::to_f64(&exact.value(&s3).unwrap()) - fb.value(&s3).unwrap();
        assert!(diff.abs() < 1e-6);
    }
}
