//! Holds the `acceptance` test target; run it with
//! `cargo test -p piecewise-attractor-validation --test acceptance`.
