//! Build D^ℓ, B^ℓ and their difference on a small sample and inspect shells.
//!
//! cargo run --release --example distance_matrix

use sbm_distance::graph;
use sbm_distance::io;
use sbm_distance::model::{self, SbmParams};

fn main() -> sbm_distance::Result<()> {
    let params = SbmParams::circulant(2, 3.0, 1.0, 400)?;
    let sample = model::sample_graph(&params, 3);
    let g = &sample.graph;

    for ell in 1..=4 {
        let d = graph::distance_matrix(g, ell);
        let b = graph::path_expansion_matrix(g, ell, 64);
        let delta = graph::delta_matrix(&b.matrix, &d)?;
        println!(
            "ell {ell}: nnz(D) {:>6}  nnz(B) {:>6}  nnz(Delta) {:>4}  max Delta {}",
            d.nnz(),
            b.matrix.nnz(),
            delta.nnz(),
            delta.max_value()
        );
    }

    let shells = graph::bfs_shells(g, 0, 4, Some((&sample.sigma, 2)));
    println!("shell sizes around vertex 0: {:?}", shells.sizes);
    println!("by type: {:?}", shells.type_counts);

    let tangle = graph::tangle_free_check(g, 3);
    println!("3-tangle-free: {} (max excess {})", tangle.tangle_free, tangle.max_excess);

    let tiny = graph::distance_matrix(&sbm_distance::SparseGraph::cycle(5), 2);
    print!("{}", io::matrix_dump(&tiny));
    Ok(())
}
