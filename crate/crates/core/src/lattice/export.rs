//! Plain-text edge-list export.

use std::fmt::Write;

use super::Quadrangulation;

/// Header `quadrangulation v0=<n0> v1=<n1>`, then `G`, `G0`, `G1` edge lines
/// and `D <g0 index> <g1 index>` dual pairs, all in sorted order.
pub fn to_text(q: &Quadrangulation) -> String {
    let mut s = String::new();
    writeln!(s, "quadrangulation v0={} v1={}", q.n0(), q.n1()).unwrap();
    for &(a, b) in q.g_edges() {
        writeln!(s, "G {a} {b}").unwrap();
    }
    for &(a, b) in q.g0_edges() {
        writeln!(s, "G0 {a} {b}").unwrap();
    }
    for &(a, b) in q.g1_edges() {
        writeln!(s, "G1 {a} {b}").unwrap();
    }
    for i in 0..q.g0_edges().len() as u32 {
        writeln!(s, "D {i} {}", q.dual_of_g0(i)).unwrap();
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::build_diced_patch;

    #[test]
    fn radius_zero_export() {
        let text = to_text(&build_diced_patch(0));
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "quadrangulation v0=1 v1=6");
        assert_eq!(lines.len(), 7);
        assert_eq!(lines[1], "G 0 1");
    }

    #[test]
    fn dual_lines_are_a_permutation() {
        let q = build_diced_patch(3);
        let text = to_text(&q);
        let mut targets: Vec<u32> = text
            .lines()
            .filter_map(|l| l.strip_prefix("D "))
            .map(|l| l.split(' ').nth(1).unwrap().parse().unwrap())
            .collect();
        targets.sort_unstable();
        assert_eq!(targets, (0..q.g1_edges().len() as u32).collect::<Vec<_>>());
    }
}
