//! Built-in games and inequalities, all lowered to [`BellFunctional`]s.

use crate::bits;
use crate::error::{Error, Result};
use crate::functional::BellFunctional;
use crate::game::SvetlichnyGame;
use crate::rational::{int, inv_pow2, rat};

/// Reference values quoted for a catalog entry: classical, quantum and
/// no-signaling maxima. Quantum entries are floating point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ReferenceBounds {
    pub classical: (i64, i64),
    pub quantum: f64,
    pub no_signaling: (i64, i64),
}

fn tuple(s: &str) -> usize {
    let bits: Vec<u8> = s.bytes().map(|b| b - b'0').collect();
    bits::tuple_to_index(&bits).expect("static tuple")
}

/// XOR game won when the output parity equals `parity(input)`, uniform inputs.
pub fn xor_game(n: usize, label: &str, parity: impl Fn(usize) -> bool) -> BellFunctional {
    let size = 1usize << n;
    let weight = inv_pow2(n);
    let mut f = BellFunctional::zero(n, label);
    for input in 0..size {
        let target = parity(input);
        for output in 0..size {
            if bits::parity(output) == target {
                f.add_term(output, input, weight.clone());
            }
        }
    }
    f
}

/// CHSH as the two-party game `x1 ^ x2 = X1 X2`.
pub fn chsh() -> BellFunctional {
    SvetlichnyGame::canonical(2).expect("n = 2").to_functional().with_label("chsh")
}

/// Guess-your-neighbour's-input for three players: each player outputs the
/// input of the neighbour to its left, inputs restricted to even parity.
pub fn gyni3() -> BellFunctional {
    let mut f = BellFunctional::zero(3, "gyni3");
    for (out, inp) in [("000", "000"), ("011", "110"), ("101", "011"), ("110", "101")] {
        f.add_term(tuple(out), tuple(inp), rat(1, 4));
    }
    f
}

/// The three-party IP inequality (classical bound 0).
///
/// Two-party marginals `P_ij(00|11)` are read off the joint with the third
/// party's input fixed to 0 and its output summed out.
pub fn ip3() -> BellFunctional {
    let mut f = BellFunctional::zero(3, "ip3");
    for (pair, third) in [([0usize, 1usize], 2usize), ([1, 2], 0), ([2, 0], 1)] {
        let input = (1 << pair[0]) | (1 << pair[1]);
        for x_third in 0..2usize {
            f.add_term(x_third << third, input, int(-2));
        }
    }
    for inp in ["001", "010", "100"] {
        f.add_term(0, tuple(inp), int(-1));
    }
    for inp in ["110", "101", "011", "111"] {
        f.add_term(0, tuple(inp), int(2));
    }
    f
}

/// Mermin game I: `x1 ^ x2 ^ x3 = X1 X2 X3`.
pub fn mermin1() -> BellFunctional {
    xor_game(3, "mi3", |inp| inp == 0b111)
}

/// Mermin game II: `x1 ^ x2 ^ x3 = X1 X2 ^ X2 X3`.
pub fn mermin2() -> BellFunctional {
    xor_game(3, "mii3", |inp| {
        let x = |i| bits::bit(inp, i);
        (x(0) && x(1)) ^ (x(1) && x(2))
    })
}

/// Mermin facet `<100> + <010> + <001> - <111>` with correlators over
/// outputs mapped to `(-1)^x`.
pub fn mermin_facet() -> BellFunctional {
    let mut f = BellFunctional::zero(3, "mf3");
    for (inp, sign) in [("100", 1), ("010", 1), ("001", 1), ("111", -1)] {
        let input = tuple(inp);
        for output in 0..8 {
            let s = if bits::parity(output) { -sign } else { sign };
            f.add_term(output, input, int(s));
        }
    }
    f
}

/// The five three-party entries of the bounds table, in display order.
pub fn table3() -> Vec<(BellFunctional, ReferenceBounds)> {
    vec![
        (gyni3(), ReferenceBounds { classical: (1, 4), quantum: 0.25, no_signaling: (1, 3) }),
        (ip3(), ReferenceBounds { classical: (0, 1), quantum: 0.14, no_signaling: (1, 2) }),
        (mermin1(), ReferenceBounds { classical: (7, 8), quantum: 0.875, no_signaling: (1, 1) }),
        (mermin2(), ReferenceBounds { classical: (3, 4), quantum: 0.75, no_signaling: (1, 1) }),
        (mermin_facet(), ReferenceBounds { classical: (2, 1), quantum: 4.0, no_signaling: (4, 1) }),
    ]
}

/// Reference bounds of every Svetlichny game, independent of `n` and `c`.
pub fn svetlichny_reference() -> ReferenceBounds {
    ReferenceBounds {
        classical: (3, 4),
        quantum: (2.0 + std::f64::consts::SQRT_2) / 4.0,
        no_signaling: (1, 1),
    }
}

/// Reference bounds for a built-in name, if the name is a catalog entry.
pub fn reference_for(name: &str) -> Option<ReferenceBounds> {
    let base = name.split('@').next().unwrap_or(name);
    match base {
        "gyni3" | "ip3" | "mi3" | "mii3" | "mf3" => table3()
            .into_iter()
            .find(|(f, _)| f.label() == base)
            .map(|(_, r)| r),
        "chsh" => Some(svetlichny_reference()),
        _ if base.starts_with("svetlichny:") => Some(svetlichny_reference()),
        _ => None,
    }
}

/// Parses `svetlichny:<n>:<c0..cn>`, e.g. `svetlichny:3:0000`.
pub fn parse_svetlichny(name: &str) -> Result<SvetlichnyGame> {
    let bad = || Error::Parse(format!("expected svetlichny:<n>:<bits>, got {name:?}"));
    let mut parts = name.split(':');
    if parts.next() != Some("svetlichny") {
        return Err(bad());
    }
    let n: usize = parts.next().ok_or_else(bad)?.parse().map_err(|_| bad())?;
    let cbits = parts.next().ok_or_else(bad)?;
    if parts.next().is_some() {
        return Err(bad());
    }
    let c: Vec<u8> = cbits
        .bytes()
        .map(|b| match b {
            b'0' => Ok(0),
            b'1' => Ok(1),
            _ => Err(bad()),
        })
        .collect::<Result<_>>()?;
    if c.len() != n + 1 {
        return Err(Error::Parse(format!(
            "svetlichny:{n} needs {} coefficient bits, got {}",
            n + 1,
            c.len()
        )));
    }
    SvetlichnyGame::new(&c)
}

/// Resolves a built-in name (without party suffix) to its functional.
pub fn resolve(name: &str) -> Result<BellFunctional> {
    match name {
        "gyni3" => Ok(gyni3()),
        "ip3" => Ok(ip3()),
        "mi3" => Ok(mermin1()),
        "mii3" => Ok(mermin2()),
        "mf3" => Ok(mermin_facet()),
        "chsh" => Ok(chsh()),
        _ if name.starts_with("svetlichny:") => {
            let g = parse_svetlichny(name)?;
            Ok(g.to_functional().with_label(name))
        }
        _ => Err(Error::Parse(format!("unknown game {name:?}"))),
    }
}

/// Resolves `name[@p1,p2,..]` and lifts it to `n` parties. Party numbers in
/// the suffix are one-based; without a suffix the first parties are used.
pub fn resolve_for(spec: &str, n: usize) -> Result<BellFunctional> {
    let (name, parties) = match spec.split_once('@') {
        Some((name, list)) => {
            let parties = list
                .split(',')
                .map(|p| {
                    p.trim()
                        .parse::<usize>()
                        .ok()
                        .filter(|&p| p >= 1)
                        .map(|p| p - 1)
                        .ok_or_else(|| Error::Parse(format!("bad party list in {spec:?}")))
                })
                .collect::<Result<Vec<_>>>()?;
            (name, Some(parties))
        }
        None => (spec, None),
    };
    let f = resolve(name)?;
    let parties = parties.unwrap_or_else(|| (0..f.n()).collect());
    if parties.len() == n && parties.iter().enumerate().all(|(i, &p)| i == p) {
        return Ok(f);
    }
    f.lift(n, &parties)
}
