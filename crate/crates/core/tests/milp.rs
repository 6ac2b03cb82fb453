//! The exported model, read back and solved by enumeration, must agree with
//! the schedule oracle.

use std::collections::BTreeMap;

use borwin::generator::{random_huc, HucParams, PriceMode};
use borwin::huc::{export_milp_string, schedule_oracle, HucInstance};
use borwin::scalar::{parse_scalar, Scalar};
use num_traits::{One, Zero};

type Terms = Vec<(Scalar, String)>;

#[derive(Debug)]
enum Sense {
    Le,
    Ge,
    Eq,
}

#[derive(Debug, Default)]
struct Model {
    objective: Terms,
    rows: Vec<(Terms, Sense, Scalar)>,
    bounds: BTreeMap<String, (Scalar, Scalar)>,
    binaries: Vec<String>,
}

fn parse_terms(text: &str) -> Terms {
    let mut out = Vec::new();
    let (mut sign, mut coef) = (Scalar::one(), None);
    for tok in text.split_whitespace() {
        match tok {
            "+" => sign = Scalar::one(),
            "-" => sign = -Scalar::one(),
            _ => match parse_scalar(tok) {
                Ok(c) => coef = Some(c),
                Err(_) => {
                    out.push((&sign * coef.take().unwrap_or_else(Scalar::one), tok.to_string()));
                    sign = Scalar::one();
                }
            },
        }
    }
    out
}

fn parse_lp(text: &str) -> Model {
    let mut m = Model::default();
    let mut section = "";
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('\\') {
            continue;
        }
        if matches!(line, "Maximize" | "Subject To" | "Bounds" | "Binary" | "End") {
            section = line;
            continue;
        }
        match section {
            "Maximize" => m.objective = parse_terms(line.split_once(':').unwrap().1),
            "Subject To" => {
                let body = line.split_once(':').unwrap().1;
                let (sense, op) = [(Sense::Le, "<="), (Sense::Ge, ">="), (Sense::Eq, "=")]
                    .into_iter()
                    .find(|(_, op)| body.contains(op))
                    .unwrap();
                let (lhs, rhs) = body.split_once(op).unwrap();
                m.rows.push((parse_terms(lhs), sense, parse_scalar(rhs.trim()).unwrap()));
            }
            "Bounds" => {
                let parts: Vec<&str> = line.split_whitespace().collect();
                match parts[..] {
                    [lo, "<=", var, "<=", hi] => {
                        m.bounds.insert(var.into(), (parse_scalar(lo).unwrap(), parse_scalar(hi).unwrap()));
                    }
                    [var, "=", val] => {
                        let v = parse_scalar(val).unwrap();
                        m.bounds.insert(var.into(), (v.clone(), v));
                    }
                    _ => panic!("unexpected bound `{line}`"),
                }
            }
            "Binary" => m.binaries.push(line.to_string()),
            _ => panic!("text outside a section: `{line}`"),
        }
    }
    m
}

/// Best objective over all binary assignments, by depth-first search that
/// checks each row once its binaries are fixed. A continuous variable must
/// appear in exactly one equality row, which determines it.
fn solve_by_enumeration(m: &Model) -> Option<Scalar> {
    let index: BTreeMap<&str, usize> = m.binaries.iter().enumerate().map(|(k, b)| (b.as_str(), k)).collect();
    // rows grouped by the depth at which their last binary is fixed
    let mut at_depth: Vec<Vec<usize>> = vec![Vec::new(); m.binaries.len() + 1];
    for (r, (terms, _, _)) in m.rows.iter().enumerate() {
        let last = terms.iter().filter_map(|(_, v)| index.get(v.as_str())).max().map_or(0, |k| k + 1);
        at_depth[last].push(r);
    }
    let mut best = None;
    let mut vals = vec![Scalar::zero(); m.binaries.len()];
    search(m, &index, &at_depth, 0, &mut vals, &mut best);
    best
}

fn row_ok(m: &Model, index: &BTreeMap<&str, usize>, r: usize, vals: &[Scalar]) -> bool {
    let (terms, sense, rhs) = &m.rows[r];
    let mut lhs = Scalar::zero();
    let mut slack = None;
    for (c, v) in terms {
        match index.get(v.as_str()) {
            Some(&k) => lhs += c * &vals[k],
            None => slack = Some((c, v)),
        }
    }
    match (sense, slack) {
        (Sense::Eq, Some((c, v))) => {
            let s = (rhs - lhs) / c;
            let (lo, hi) = &m.bounds[v];
            lo <= &s && &s <= hi
        }
        (_, Some(_)) => panic!("continuous variable outside an equality row"),
        (Sense::Le, None) => &lhs <= rhs,
        (Sense::Ge, None) => &lhs >= rhs,
        (Sense::Eq, None) => &lhs == rhs,
    }
}

fn search(
    m: &Model,
    index: &BTreeMap<&str, usize>,
    at_depth: &[Vec<usize>],
    depth: usize,
    vals: &mut Vec<Scalar>,
    best: &mut Option<Scalar>,
) {
    if !at_depth[depth].iter().all(|&r| row_ok(m, index, r, vals)) {
        return;
    }
    if depth == vals.len() {
        let fixed = m.binaries.iter().zip(vals.iter()).all(|(b, x)| {
            m.bounds.get(b).is_none_or(|(lo, hi)| lo <= x && x <= hi)
        });
        if fixed {
            let obj: Scalar = m.objective.iter().map(|(c, v)| c * &vals[index[v.as_str()]]).sum();
            if best.as_ref().is_none_or(|b| &obj > b) {
                *best = Some(obj);
            }
        }
        return;
    }
    for bit in [Scalar::zero(), Scalar::one()] {
        vals[depth] = bit;
        search(m, index, at_depth, depth + 1, vals, best);
    }
}

fn check(inst: &HucInstance, label: &str) {
    let model = parse_lp(&export_milp_string(inst));
    let got = solve_by_enumeration(&model);
    let want = schedule_oracle(inst, 1 << 20).unwrap().best.map(|(_, r)| r);
    assert_eq!(got, want, "{label}");
}

#[test]
fn example_model_matches_oracle() {
    let inst = borwin::fixtures::example_huc();
    let model = parse_lp(&export_milp_string(&inst));
    assert_eq!(model.binaries.len(), 18);
    assert_eq!(model.rows.len(), 38);
    check(&inst, "example");
}

#[test]
fn random_models_match_oracle() {
    let mut n = 0;
    for seed in 0..60u64 {
        for min_updown in 1..=3 {
            let params = HucParams {
                periods: 2 + (seed % 3) as usize,
                points: 2 + (seed % 2) as usize,
                min_updown,
                price_mode: if seed % 2 == 0 { PriceMode::Independent } else { PriceMode::NearFlat },
                slack: (seed % 5) as i64,
                random_initial: seed % 3 != 0,
            };
            let inst = random_huc(&params, seed);
            check(&inst, &format!("seed {seed}, min_updown {min_updown}: {inst:?}"));
            n += 1;
        }
    }
    assert_eq!(n, 180);
}
