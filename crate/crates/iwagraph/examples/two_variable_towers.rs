//! A (Z_p)²-tower: two independent deck generators σ, τ on a doubled edge.
//! The growth of v_p(|J_m|) is governed by a pair (m₀, l₀) instead of
//! (μ, λ), with leading terms m₀·p^(2m) and l₀·m·p^m — and the whole
//! growth law can be pinned down exactly by solving for the lower-order
//! coefficients and checking the prediction on a level the fit never saw.

use iwagraph::iwasawa::growth_basis_labels;
use iwagraph::{
    analytic_vp_level, char_det, greenberg_fit, invariants_l2, Multigraph, VoltageAssignment,
};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// "2·m*p^m + 2·p^m - 2" from coefficient/label pairs, signs folded in.
fn pretty_formula(coefficients: &[BigRational], labels: &[&str]) -> String {
    let mut out = String::new();
    for (c, label) in coefficients.iter().zip(labels) {
        if c.is_zero() {
            continue;
        }
        let sign = if c.is_negative() { "-" } else { "+" };
        let magnitude = c.abs();
        if !out.is_empty() {
            out.push_str(&format!(" {sign} "));
        } else if c.is_negative() {
            out.push('-');
        }
        if *label == "1" {
            out.push_str(&magnitude.to_string());
        } else if magnitude.is_one() {
            out.push_str(label);
        } else {
            out.push_str(&format!("{magnitude}·{label}"));
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

fn main() -> iwagraph::Result<()> {
    // Doubled triangle; the two parallel edges carry σ and τ, so the cycles
    // of the base generate all of (Z/3^m)² at every level.
    let base = Multigraph::new(3, vec![(0, 1), (0, 1), (1, 2), (2, 0)])?;
    let voltages = VoltageAssignment::new(
        3,
        2,
        vec![vec![1, 0], vec![0, 1], vec![0, 0], vec![0, 0]],
    )?;

    let det = char_det(&base, &voltages)?;
    println!("doubled triangle, p = 3, independent voltages σ and τ\n");
    println!("det Δ∞ (T = τ-1, S = σ-1): {}", det.shift_vars_plus_one());

    let inv = invariants_l2(&base, &voltages)?;
    println!("m₀ = {} (no p divides the content)", inv.m0);
    println!("l₀ = {} (from the distinguished part mod 3)", inv.l0);
    println!("det Δ∞ mod 3 = {}", inv.distinguished_mod_p);
    assert_eq!(inv.m0, 0);
    assert_eq!(inv.l0, 2);

    // Valuations up the tower, straight from the analytic engine. Level m
    // already has 3^(2m) characters, so brute-force SNF stops being an
    // option quickly; the determinant does not care.
    let mut rows = Vec::new();
    for m in 0..=5u32 {
        rows.push((m, analytic_vp_level(&base, &voltages, m)?));
    }
    println!("\n{:>5} {:>10}", "level", "v_3(|J|)");
    for &(m, v) in &rows {
        println!("{m:>5} {v:>10}");
    }

    // Fit the model c₀·p^(2m) + c₁·m·p^m + c₂·p^m + c₃·m + c₄ on levels
    // 0..4 only, with c₀ pinned to zero (that is what m₀ = 0 means).
    let fit = greenberg_fit(&rows[..5], 3, 2, &[0])?;
    let labels = growth_basis_labels(2)?;
    println!(
        "\nexact fit on levels 0–4: v_3 = {}",
        pretty_formula(&fit.coefficients, labels)
    );
    assert_eq!(fit.coefficients[1], BigRational::from_integer(2.into()));
    println!("the m·p^m coefficient equals l₀ = 2, as it must");

    // The fit used levels 0..4; level 5 is a genuine prediction.
    let (m, v) = rows[5];
    let predicted = eval_basis(&fit.coefficients, 3, m);
    println!("\nlevel {m}: predicted v_3 = {predicted}, computed v_3 = {v}");
    assert_eq!(predicted, BigRational::from_integer(v.into()));
    println!("prediction is exact");

    Ok(())
}

fn eval_basis(coefficients: &[BigRational], p: u64, m: u32) -> BigRational {
    let pm = BigInt::from(p).pow(m);
    let basis = [
        &pm * &pm,
        &pm * m,
        pm,
        BigInt::from(m),
        BigInt::one(),
    ];
    coefficients
        .iter()
        .zip(basis)
        .map(|(c, b)| c * BigRational::from_integer(b))
        .fold(BigRational::zero(), |acc, x| acc + x)
}
