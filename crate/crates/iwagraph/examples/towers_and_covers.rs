//! Build a voltage tower and walk up it: expand the derived covers, watch
//! the spanning-tree counts grow, and see how connectivity of the whole
//! tower is decided from the base graph alone.

use iwagraph::{
    derived_graph, multigraph::Multigraph, voltage::tower_connectivity,
    voltage::TowerConnectivity, VoltageAssignment,
};

fn main() -> iwagraph::Result<()> {
    // A triangle whose first edge carries the generator τ of Z_2. Truncating
    // the voltage mod 2^m turns the triangle into a cyclic cover with deck
    // group Z/2^m: a hexagon, then a 12-gon, and so on.
    let triangle = Multigraph::new(3, vec![(0, 1), (1, 2), (2, 0)])?;
    let tau = VoltageAssignment::new(2, 1, vec![vec![1], vec![0], vec![0]])?;

    println!("base: triangle, p = 2, voltage τ on the edge 0 → 1\n");
    println!("{:>5} {:>9} {:>7} {:>15}", "level", "vertices", "edges", "spanning trees");
    for m in 0..=4 {
        let cover = derived_graph(&triangle, &tau, m, 10_000)?;
        println!(
            "{m:>5} {:>9} {:>7} {:>15}",
            cover.graph().vertex_count(),
            cover.graph().edge_count(),
            cover.graph().spanning_tree_count(),
        );
    }

    // Vertices of the level-m cover are pairs (base vertex, group element);
    // the deck group acts freely by translation in the second coordinate.
    let hexagon = derived_graph(&triangle, &tau, 1, 10_000)?;
    println!("\nlevel-1 cover vertex labels and the action of the deck generator:");
    for v in 0..hexagon.graph().vertex_count() {
        let (base, group) = hexagon.vertex_label(v);
        let image = hexagon.translate(v, &[1]);
        println!("  vertex {v} = (base {base}, g = {group:?})  →  vertex {image}");
    }

    // Connectivity of every level at once, from the fundamental-cycle
    // voltages of the base: the tower is connected exactly when those
    // voltages generate (Z/p)^l.
    match tower_connectivity(&triangle, &tau)? {
        TowerConnectivity::Connected { generating_cycles } => {
            println!("\ntower is connected; cycles at edges {generating_cycles:?} generate the deck group");
        }
        TowerConnectivity::Disconnected { witness } => {
            println!("\ntower is disconnected, witnessed by the character {witness:?}");
        }
    }

    // With every voltage trivial the covers are disjoint copies of the base,
    // and the certificate is a character that kills all cycle voltages.
    let trivial = VoltageAssignment::trivial(2, 1, 3)?;
    match tower_connectivity(&triangle, &trivial)? {
        TowerConnectivity::Connected { .. } => unreachable!("trivial voltages never connect"),
        TowerConnectivity::Disconnected { witness } => {
            println!("trivial voltages: disconnected, witness character {witness:?}");
        }
    }

    // The same works in higher rank: two independent generators on a doubled
    // edge connect a (Z/p^m)^2 tower.
    let doubled = Multigraph::new(3, vec![(0, 1), (0, 1), (1, 2), (2, 0)])?;
    let two_gens = VoltageAssignment::new(
        5,
        2,
        vec![vec![1, 0], vec![0, 1], vec![0, 0], vec![0, 0]],
    )?;
    let cover = derived_graph(&doubled, &two_gens, 1, 10_000)?;
    println!(
        "\nrank-2 tower over the doubled triangle: level 1 has {} vertices ({} × 5²), connected: {}",
        cover.graph().vertex_count(),
        cover.base_vertices(),
        cover.graph().is_connected(),
    );

    Ok(())
}
