//! Temporary profiling probe (removed before release).
use qzeros_core::enumerate::{subspace_points, StreamCfg};
use qzeros_core::field::{Field, Rationals};
use qzeros_core::heights::Subspace;
use qzeros_core::linalg::Matrix;
use qzeros_core::quadspace::{QuadForm, QuadSpace, SearchParams};
use std::time::Instant;

#[test]
fn probe_enumeration_speed() {
    let k = Rationals;
    let n = 4;
    let space = Subspace::full(&k, n);
    let t0 = Instant::now();
    let mut count = 0u64;
    for item in subspace_points(&k, &space, StreamCfg::new(20, 200_000)).unwrap() {
        if item.is_ok() {
            count += 1;
        }
    }
    println!("ambient stream: {count} points in {:?}", t0.elapsed());
    // with quad evaluation
    let mut m = Matrix::filled(n, n, k.from_i64(0));
    for i in 0..n {
        m.set(i, i, k.from_i64(1));
    }
    let form = QuadForm::new(&k, m).unwrap();
    let t0 = Instant::now();
    let mut zeros = 0u64;
    let tester = k.quad_zero_tester(form.matrix());
    for item in subspace_points(&k, &space, StreamCfg::new(20, 200_000)).unwrap() {
        if let Ok((p, _)) = item {
            if tester(&p) {
                zeros += 1;
            }
        }
    }
    println!("with quad eval: {zeros} zeros in {:?}", t0.elapsed());
    // in a proper subspace
    let space3 = Subspace::from_vectors(
        &k,
        4,
        &[
            vec![k.from_i64(1), k.from_i64(0), k.from_i64(1), k.from_i64(-1)],
            vec![k.from_i64(0), k.from_i64(1), k.from_i64(2), k.from_i64(1)],
            vec![k.from_i64(0), k.from_i64(0), k.from_i64(3), k.from_i64(1)],
        ],
    )
    .unwrap();
    let t0 = Instant::now();
    let mut count = 0u64;
    for item in subspace_points(&k, &space3, StreamCfg::new(50, 200_000)).unwrap() {
        if item.is_ok() {
            count += 1;
        }
    }
    println!("subspace stream: {count} points in {:?}", t0.elapsed());
    // full witt on an instance with an anisotropic tail
    let rows: Vec<Vec<i64>> = vec![
        vec![0, 1, 0, 0],
        vec![1, 0, 0, 0],
        vec![0, 0, 2, 1],
        vec![0, 0, 1, 3],
    ];
    let mut m = Matrix::filled(4, 4, k.from_i64(0));
    for (i, r) in rows.iter().enumerate() {
        for (j, &x) in r.iter().enumerate() {
            m.set(i, j, k.from_i64(x));
        }
    }
    let form = QuadForm::new(&k, m).unwrap();
    let t0 = Instant::now();
    let qs = QuadSpace::new(
        &k,
        Subspace::full(&k, 4),
        form,
        &SearchParams {
            cap_log: None,
            budget: 250_000,
        },
    );
    match &qs {
        Ok(q) => println!(
            "witt with anisotropic tail: ok (witt index {}) in {:?}",
            q.witt_index(),
            t0.elapsed()
        ),
        Err(e) => println!("witt failed: {e} in {:?}", t0.elapsed()),
    }
}
