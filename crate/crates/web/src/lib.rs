//! Browser bindings for the demo page in `www/`.
//!
//! Each exported function takes plain strings and numbers and returns a JSON
//! string, either the result or `{"error": "..."}`. The pure `*_json`
//! functions carry the logic so they can be tested natively.

use rds_core::number::{format_list, parse_list, Rat};
use rds_core::pythagorean::{classify_ratio, min_hypotenuse, primitive_triplets, ratios_of, IntervalProbe};
use rds_core::solver::{indices_set, solve, verify_rds};
use serde::Serialize;
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

/// Largest hypotenuse bound the page may request for a pool.
pub const MAX_POOL_GAMMA: u32 = 5000;
/// Largest cap for interval probing.
pub const MAX_PROBE_CAP: u32 = 200_000;

fn error(message: impl ToString) -> String {
    json!({ "error": message.to_string() }).to_string()
}

#[derive(Serialize)]
struct Point {
    x: Rat,
    y: Rat,
    xf: f64,
    yf: f64,
}

#[derive(Serialize)]
struct Pair {
    i: usize,
    j: usize,
    sum: Rat,
    distance: Option<Rat>,
    /// `a² + b²` for the canonical sum `b/a`, as text.
    leg_square_sum: String,
}

/// Solves a head given as comma-separated ratios.
pub fn solve_json(psi: &str) -> String {
    let head = match parse_list(psi) {
        Ok(h) => h,
        Err(e) => return error(e),
    };
    if head.len() < 3 {
        return error("enter at least three ratios");
    }
    if head.len() > 12 {
        return error("at most twelve ratios");
    }
    let outcome = match solve(&head, None) {
        Ok(o) => o,
        Err(e) => return error(e),
    };
    let pairs: Value = if outcome.distinct {
        match verify_rds(&outcome.x) {
            Ok(check) => serde_json::to_value(
                check
                    .pairs
                    .into_iter()
                    .map(|p| Pair {
                        i: p.i,
                        j: p.j,
                        sum: p.sum,
                        distance: p.distance,
                        leg_square_sum: p.leg_square_sum.to_string(),
                    })
                    .collect::<Vec<_>>(),
            )
            .expect("pairs serialize"),
            Err(e) => return error(e),
        }
    } else {
        Value::Array(Vec::new())
    };
    let points: Vec<Point> = outcome
        .x
        .iter()
        .map(|x| {
            let y = x.square();
            Point { xf: x.to_f64(), yf: y.to_f64(), x: x.clone(), y }
        })
        .collect();
    let labels: Vec<String> =
        indices_set(head.len()).expect("n >= 3").pairs().iter().map(|(i, j)| format!("({i},{j})")).collect();
    json!({
        "n": head.len(),
        "x": format_list(&outcome.x),
        "points": points,
        "psi": outcome.psi.entries,
        "psi_labels": labels,
        "tail_failing": outcome.existence.failing,
        "existence": outcome.existence.ok,
        "distinct": outcome.distinct,
        "general_position": outcome.general_position,
        "rds": outcome.solution.is_some(),
        "pairs": pairs,
    })
    .to_string()
}

/// The ratio pool for hypotenuses up to `gamma_max`, with zero.
pub fn pool_json(gamma_max: u32) -> String {
    if gamma_max > MAX_POOL_GAMMA {
        return error(format!("bound at most {MAX_POOL_GAMMA}"));
    }
    let triplets = primitive_triplets(gamma_max.into());
    let mut ratios: Vec<(Rat, i64)> =
        triplets.iter().flat_map(|t| ratios_of(t).into_iter().map(move |r| (r, t.gamma))).collect();
    ratios.push((Rat::zero(), 0));
    ratios.sort();
    let entries: Vec<Value> = ratios
        .iter()
        .map(|(r, gamma)| {
            let class = classify_ratio(r).map(|c| c.to_string()).unwrap_or_default();
            json!({ "psi": r, "value": r.to_f64(), "gamma": gamma, "class": class })
        })
        .collect();
    json!({
        "gamma_max": gamma_max,
        "primitive_count": triplets.len(),
        "pool_size": ratios.len(),
        "asymptotic": f64::from(gamma_max) / (2.0 * std::f64::consts::PI),
        "ratios": entries,
    })
    .to_string()
}

/// The ratio of smallest hypotenuse inside `(lo, hi)`.
pub fn find_ratio_json(lo: &str, hi: &str, gamma_cap: u32) -> String {
    if gamma_cap > MAX_PROBE_CAP {
        return error(format!("cap at most {MAX_PROBE_CAP}"));
    }
    let (lo, hi) = match (lo.trim().parse::<Rat>(), hi.trim().parse::<Rat>()) {
        (Ok(lo), Ok(hi)) => (lo, hi),
        (Err(e), _) | (_, Err(e)) => return error(e),
    };
    match IntervalProbe::new(gamma_cap.into()).find(&lo, &hi) {
        Ok(Some(q)) => {
            let gamma = if q.is_zero() { None } else { min_hypotenuse(&q).ok().map(|g| g.to_string()) };
            json!({ "found": true, "psi": q, "value": q.to_f64(), "gamma": gamma }).to_string()
        }
        Ok(None) => json!({ "found": false }).to_string(),
        Err(e) => error(e),
    }
}

#[wasm_bindgen]
pub fn solve_head(psi: &str) -> String {
    solve_json(psi)
}

#[wasm_bindgen]
pub fn ratio_pool(gamma_max: u32) -> String {
    pool_json(gamma_max)
}

#[wasm_bindgen]
pub fn find_ratio(lo: &str, hi: &str, gamma_cap: u32) -> String {
    find_ratio_json(lo, hi, gamma_cap)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(s: &str) -> Value {
        serde_json::from_str(s).unwrap()
    }

    #[test]
    fn solve_three_points() {
        let v = parse(&solve_json("4/3, 8/15, 12/5"));
        assert_eq!(v["x"], "-4/15,8/5,4/5");
        assert_eq!(v["rds"], true);
        let d: Vec<&str> = v["pairs"].as_array().unwrap().iter().map(|p| p["distance"].as_str().unwrap()).collect();
        assert_eq!(d, ["28/9", "272/225", "52/25"]);
        assert_eq!(v["psi_labels"][2], "(2,3)");
    }

    #[test]
    fn solve_reports_failures() {
        let v = parse(&solve_json("0,7/24,4/3,-3/4,-7/24"));
        assert_eq!(v["rds"], false);
        assert_eq!(v["tail_failing"], json!([8, 9]));
        assert_eq!(v["pairs"][7]["leg_square_sum"], "1201");
        assert!(parse(&solve_json("1/0,1,1"))["error"].is_string());
        assert!(parse(&solve_json("4/3,3/4"))["error"].is_string());
        assert_eq!(parse(&solve_json("4/3,4/3,4/3"))["distinct"], false);
    }

    #[test]
    fn pool_and_probe() {
        let v = parse(&pool_json(25));
        assert_eq!((v["primitive_count"].as_u64(), v["pool_size"].as_u64()), (Some(4), Some(17)));
        assert_eq!(v["ratios"][8]["psi"], "0");
        assert!(parse(&pool_json(MAX_POOL_GAMMA + 1))["error"].is_string());
        let p = parse(&find_ratio_json("1/2", "1", 100));
        assert_eq!((p["psi"].as_str(), p["gamma"].as_str()), (Some("3/4"), Some("5")));
        assert_eq!(parse(&find_ratio_json("1/1000000", "2/1000000", 10))["found"], false);
        assert!(parse(&find_ratio_json("1", "1/2", 10))["error"].is_string());
    }
}
