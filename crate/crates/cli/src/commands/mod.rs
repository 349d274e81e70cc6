//! One module per subcommand.

pub mod amiv;
pub mod artstein;
pub mod binary_iv;
pub mod intersect;
pub mod lattice;

/// `yes` or `no`.
pub(crate) fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}
