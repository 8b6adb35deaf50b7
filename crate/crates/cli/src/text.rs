//! Plain-text rendering of reports for `--format text`.

use std::fmt::Write;

use crate::report::*;

pub trait Render {
    fn render(&self) -> String;
}

fn algebra(out: &mut String, a: &AlgebraSummary) {
    let _ = writeln!(
        out,
        "algebra: dimension {}, abelian {}, solvable {}, perfect {}, derived series {:?}",
        a.dimension, a.abelian, a.solvable, a.perfect, a.derived_series
    );
}

impl Render for CentralizerReport {
    fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "centralizer of an algebra in dimension {} up to degree {}", self.dimension, self.max_degree);
        algebra(&mut out, &self.algebra);
        for b in &self.degrees {
            let _ = writeln!(out, "degree {}: dimension {}", b.degree, b.dimension);
            for f in &b.basis {
                let _ = writeln!(out, "  ({})", f.join(", "));
            }
        }
        let _ = writeln!(
            out,
            "directional closure: {} pairs, {} violations",
            self.closure.pairs_checked,
            self.closure.violations.len()
        );
        for n in &self.notes {
            let _ = writeln!(out, "note: {n}");
        }
        out
    }
}

impl Render for InvariantsReport {
    fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "relative invariants for alpha = ({}) up to degree {}", self.alpha.join(", "), self.max_degree);
        algebra(&mut out, &self.algebra);
        for b in &self.degrees {
            let _ = writeln!(out, "degree {}: dimension {}", b.degree, b.dimension);
            for p in &b.basis {
                let _ = writeln!(out, "  {p}");
            }
        }
        if let Some(r) = &self.resonance {
            let _ = writeln!(
                out,
                "resonance: {} solutions, simple {}, generator {:?}",
                r.solutions.len(),
                r.simple,
                r.primitive_generator
            );
        }
        for n in &self.notes {
            let _ = writeln!(out, "note: {n}");
        }
        out
    }
}

impl Render for FinitenessReport {
    fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "verdict: {}", self.verdict);
        algebra(&mut out, &self.algebra);
        match &self.certificate {
            Some(Certificate::Invariant { witness, powers_checked, passed }) => {
                let _ = writeln!(out, "invariant witness: {witness}");
                let _ = writeln!(out, "phi^m * E equivariant for m in {powers_checked:?}: {passed}");
            }
            Some(Certificate::SameSignCombination { combination, spectrum, max_degree, nilpotency }) => {
                let _ = writeln!(out, "combination: ({})", combination.join(", "));
                let _ = writeln!(out, "spectrum: ({})", spectrum.join(", "));
                let _ = writeln!(out, "degree bound: {max_degree}");
                if let Some(n) = nilpotency {
                    let _ = writeln!(
                        out,
                        "nilpotency: d = {}, {} pairs checked, {} violations",
                        n.max_degree,
                        n.pairs_checked,
                        n.violations.len()
                    );
                }
            }
            None => {}
        }
        if let Some(b) = self.searched_bound {
            let _ = writeln!(out, "no certificate found up to degree {b}");
        }
        out
    }
}

impl Render for SolveReport {
    fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "method: {}", self.method);
        let _ = writeln!(out, "x({}) = ({})", self.t0, self.y0.join(", "));
        for (i, c) in self.solution_text.iter().enumerate() {
            let _ = writeln!(out, "x{}(t) = {c}", i + 1);
        }
        let _ = writeln!(out, "exact residual zero: {}", self.residual_is_zero);
        let _ = writeln!(out, "polynomial in t: {}", self.polynomial_in_t);
        if let Some(v) = &self.verification {
            let _ = writeln!(
                out,
                "rk4 on [{}, {}] with {} steps: max error {:e} (tolerance {:e}) {}",
                self.t0,
                v.t_end,
                v.steps,
                v.max_abs_error,
                v.tolerance,
                if v.passed { "ok" } else { "FAILED" }
            );
        }
        out
    }
}

impl Render for NormalFormCommandReport {
    fn render(&self) -> String {
        let mut out = String::new();
        let r = &self.report;
        let _ = writeln!(out, "convention: {}", r.convention);
        for d in &r.degrees {
            let _ = writeln!(out, "degree {}: {} resonant monomial fields", d.degree, d.resonant_basis.len());
            let _ = writeln!(out, "  removed:   ({})", d.removed.join(", "));
            let _ = writeln!(out, "  generator: ({})", d.generator.join(", "));
        }
        let _ = writeln!(out, "normal form: ({})", r.normal_form.join(", "));
        out
    }
}

impl Render for VerifyReport {
    fn render(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let _ = writeln!(out, "[{}] {}: {}", if c.passed { "ok" } else { "FAIL" }, c.name, c.detail);
        }
        let _ = writeln!(out, "{}", if self.passed { "all checks passed" } else { "some checks failed" });
        out
    }
}
