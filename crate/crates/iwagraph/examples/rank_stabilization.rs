//! Quotients J_m / I·J_m along a tower, for an ideal I of the group algebra
//! acting through the deck group. When two consecutive levels give the same
//! quotient size, every later level does too — so an infinite family of
//! statements is settled by one finite computation. Good ideals stabilize
//! immediately; dropping a generator can break stabilization entirely.

use iwagraph::jacobian::{fukuda_stabilize, rank_sequence};
use iwagraph::{ComputeBudget, LaurentPoly, Multigraph, RankIdealSpec, VoltageAssignment};

fn main() -> iwagraph::Result<()> {
    // Triangle with one edge tripled and one extra copy carrying τ, at
    // p = 3. This tower has μ = 1: the 3-part of the Jacobian explodes like
    // 3^(3^m), and the quotient by (3) alone grows with it.
    let base = Multigraph::new(3, vec![(0, 1), (0, 1), (1, 2), (2, 0)])?;
    let tau = VoltageAssignment::new(3, 1, vec![vec![1], vec![0], vec![0], vec![0]])?;
    let budget = ComputeBudget::default();

    // T = τ - 1 in the group variables.
    let t = LaurentPoly::variable(1, 0).sub(&LaurentPoly::one(1));

    println!("doubled-edge triangle, p = 3, μ = 1 tower\n");

    let just_p = RankIdealSpec::new(1, vec![]);
    let ranks = rank_sequence(&base, &tau, &just_p, 4, &budget)?;
    println!("I = (3):    v_3|J/IJ| by level = {ranks:?}");
    match fukuda_stabilize(&base, &tau, &just_p, 4, &budget)? {
        Some((m, r)) => println!("            stabilizes at level {m} with rank {r}"),
        None => println!("            no two consecutive levels agree — μ > 0 keeps it growing"),
    }

    let p_and_t = RankIdealSpec::new(1, vec![t.clone()]);
    let ranks = rank_sequence(&base, &tau, &p_and_t, 4, &budget)?;
    println!("\nI = (3, T): v_3|J/IJ| by level = {ranks:?}");
    match fukuda_stabilize(&base, &tau, &p_and_t, 4, &budget)? {
        Some((m, r)) => println!(
            "            levels {m} and {} agree at rank {r}; all later levels must too",
            m + 1
        ),
        None => println!("            did not stabilize by level 4"),
    }

    // The same machinery on a plain untwisted-looking tower: the 3-adic
    // cyclic cover of the triangle itself (μ = 0, λ = 1). Both ideals
    // stabilize at once.
    let plain = Multigraph::new(3, vec![(0, 1), (1, 2), (2, 0)])?;
    let tau3 = VoltageAssignment::new(3, 1, vec![vec![1], vec![0], vec![0]])?;
    println!("\ntriangle itself, p = 3, λ = 1 tower");
    for (name, ideal) in [
        ("(3)", RankIdealSpec::new(1, vec![])),
        ("(3, T)", RankIdealSpec::new(1, vec![t.clone()])),
        ("(9, T)", RankIdealSpec::new(2, vec![t])),
    ] {
        let ranks = rank_sequence(&plain, &tau3, &ideal, 3, &budget)?;
        let verdict = match fukuda_stabilize(&plain, &tau3, &ideal, 3, &budget)? {
            Some((m, r)) => format!("stable from level {m} at {r}"),
            None => "not stable by level 3".into(),
        };
        println!("  I = {name:<7} ranks {ranks:?} — {verdict}");
    }

    Ok(())
}
