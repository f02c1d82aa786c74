//! Benchmarks live in `benches/`; run them with `cargo bench -p coarse-l1-bench`.
