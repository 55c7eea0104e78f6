//! Holds the `acceptance` test target, which runs after the `spinlab`
//! targets. See `tests/acceptance.rs`.
