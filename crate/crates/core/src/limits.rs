/// Size guards for the exhaustive operations.
///
/// The defaults keep every enumeration at desk scale. [`Limits::unbounded`]
/// lifts all of them; the CLI only uses it when `TSTRUCT_GUARD_OVERRIDE` is set.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Largest poset accepted by `enumerate_sp_subsets`.
    pub max_upset_elements: usize,
    /// Largest poset accepted by `enumerate_filtrations`.
    pub max_filtration_elements: usize,
    /// Largest `hi - lo` accepted by `enumerate_filtrations`.
    pub max_window_width: i64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_upset_elements: 20,
            max_filtration_elements: 8,
            max_window_width: 8,
        }
    }
}

impl Limits {
    pub fn unbounded() -> Self {
        Limits {
            max_upset_elements: 64,
            max_filtration_elements: 64,
            max_window_width: i64::MAX,
        }
    }
}
