//! Verification reports: one [`Comparison`] per checked identity instance,
//! rendered as text, JSON or CSV. Rendering depends only on the entries and
//! their order, so equal inputs give byte-identical output.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::exact::{format_rational, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Identity {
    MhsDuality,
    MhsEmbedding,
    CDuality,
    DifferenceFormula,
    Recurrence,
    RecursiveOracle,
    KtReduction,
    TwoIndexReduction,
    Shift,
    DifferenceSeriesClosedForm,
    DifferenceSeriesSwap,
    DifferenceSeriesAnnihilator,
    SeriesInversion,
    InversionOfMultiplication,
    InversionOfDerivative,
    XiConjugation,
    Commutator,
    SeriesDuality,
    DepthReductionSeries,
    TelescopedReduction,
}

impl Identity {
    pub fn name(self) -> &'static str {
        match self {
            Self::MhsDuality => "mhs-duality",
            Self::MhsEmbedding => "mhs-embedding",
            Self::CDuality => "c-duality",
            Self::DifferenceFormula => "difference-formula",
            Self::Recurrence => "recurrence",
            Self::RecursiveOracle => "recursive-oracle",
            Self::KtReduction => "kt-reduction",
            Self::TwoIndexReduction => "two-index-reduction",
            Self::Shift => "shift",
            Self::DifferenceSeriesClosedForm => "difference-series-closed-form",
            Self::DifferenceSeriesSwap => "difference-series-swap",
            Self::DifferenceSeriesAnnihilator => "difference-series-annihilator",
            Self::SeriesInversion => "series-inversion",
            Self::InversionOfMultiplication => "inversion-of-multiplication",
            Self::InversionOfDerivative => "inversion-of-derivative",
            Self::XiConjugation => "xi-conjugation",
            Self::Commutator => "commutator",
            Self::SeriesDuality => "series-duality",
            Self::DepthReductionSeries => "depth-reduction-series",
            Self::TelescopedReduction => "telescoped-reduction",
        }
    }

    /// The statement being checked, in plain ASCII notation.
    pub fn statement(self) -> &'static str {
        match self {
            Self::MhsDuality => "sum_k (-1)^k C(n,k) s_mu(k) = s_mu*(n)",
            Self::MhsEmbedding => "c_{e1(mu)}(n) = c_{e2(mu)}(n) = s_mu(n)",
            Self::CDuality => "nabla c[x_1;..;x_r | t] = c[1-x_1;..;1-x_r | t]",
            Self::DifferenceFormula => {
                "(D_1^k_1..D_r^k_r c[x | t])(n) = c[x_1;..;x_r;1-x_1;..;1-x_r | t](n,k)"
            }
            Self::Recurrence => {
                "(|n|+t_1) c[x | t](n) - sum_k x_k1 n_k c[x | t](n-e_k) = c[-x | t_2..](n)"
            }
            Self::RecursiveOracle => "recursive evaluation of c[x | t](n) = chain enumeration of c[x | t](n)",
            Self::KtReduction => "c_{x_1..x_p}(n) = c[x | 1,..,1](n)",
            Self::TwoIndexReduction => "c_{x;y}(n,k) with P = c[x;y | 1,..,1](n,k) with Q",
            Self::Shift => "sum_{i in S} a(n+e_i) = c a(n) when sum_{i in S} x_i = (c,..,c)",
            Self::DifferenceSeriesClosedForm => "F_a(X,Y) = f_a(X-Y) e^{Y_1+..+Y_r}",
            Self::DifferenceSeriesSwap => "F_{nabla a}(X,Y) = F_a(Y,X)",
            Self::DifferenceSeriesAnnihilator => "(d/dX_i + d/dY_i - 1) F_a = 0",
            Self::SeriesInversion => "f_{nabla a} = f_a(-X) e^{X_1+..+X_r}",
            Self::InversionOfMultiplication => "nabla(X_i f) = -X_i nabla f",
            Self::InversionOfDerivative => "nabla(d/dX_i f) = (1 - d/dX_i) nabla f",
            Self::XiConjugation => "nabla(xi_x f) = xi_{1-x} nabla f",
            Self::Commutator => "[sum_S d/dX_i - c, xi_x + t] = sum_S d/dX_i - c when sum_S x_i = c",
            Self::SeriesDuality => "nabla f[x | t] = f[1-x | t]",
            Self::DepthReductionSeries => "(xi_{x_.1} + t_1) f[x | t] = f[-x | t_2..]",
            Self::TelescopedReduction => {
                "(xi_{x_.p-1} + t_p-1)..(xi_{x_.1} + t_1) f[x | t] = e^{x_1p X_1 + .. + x_rp X_r}"
            }
        }
    }
}

/// One checked instance: `{identity, spec, index, lhs, rhs, equal}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Comparison {
    pub identity: String,
    pub spec: String,
    pub index: Vec<usize>,
    pub lhs: String,
    pub rhs: String,
    pub equal: bool,
}

impl Comparison {
    pub fn new(
        identity: Identity,
        spec: impl Into<String>,
        index: Vec<usize>,
        lhs: &Rational,
        rhs: &Rational,
    ) -> Self {
        Self {
            identity: identity.name().to_string(),
            spec: spec.into(),
            index,
            lhs: format_rational(lhs),
            rhs: format_rational(rhs),
            equal: lhs == rhs,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Report {
    identities: BTreeSet<Identity>,
    comparisons: Vec<Comparison>,
}

impl Report {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, identity: Identity, comparison: Comparison) {
        self.identities.insert(identity);
        self.comparisons.push(comparison);
    }

    pub fn record(
        &mut self,
        identity: Identity,
        spec: impl Into<String>,
        index: Vec<usize>,
        lhs: &Rational,
        rhs: &Rational,
    ) {
        self.push(identity, Comparison::new(identity, spec, index, lhs, rhs));
    }

    pub fn merge(&mut self, other: Report) {
        self.identities.extend(other.identities);
        self.comparisons.extend(other.comparisons);
    }

    pub fn comparisons(&self) -> &[Comparison] {
        &self.comparisons
    }

    pub fn identities(&self) -> impl Iterator<Item = Identity> + '_ {
        self.identities.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.comparisons.len()
    }

    pub fn is_empty(&self) -> bool {
        self.comparisons.is_empty()
    }

    pub fn failures(&self) -> impl Iterator<Item = &Comparison> {
        self.comparisons.iter().filter(|c| !c.equal)
    }

    pub fn all_equal(&self) -> bool {
        self.comparisons.iter().all(|c| c.equal)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for id in &self.identities {
            let _ = writeln!(out, "# {}: {}", id.name(), id.statement());
        }
        for c in &self.comparisons {
            let _ = writeln!(
                out,
                "{} {} n={:?} lhs={} rhs={} {}",
                c.identity,
                c.spec,
                c.index,
                c.lhs,
                c.rhs,
                if c.equal { "ok" } else { "FAIL" }
            );
        }
        let failures = self.failures().count();
        let _ = writeln!(out, "{} comparisons, {} failures", self.len(), failures);
        out
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.comparisons).expect("plain data serializes");
        s.push('\n');
        s
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["identity", "spec", "index", "lhs", "rhs", "equal"])
            .expect("in-memory write");
        for c in &self.comparisons {
            let index = c.index.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(" ");
            w.write_record([
                c.identity.as_str(),
                c.spec.as_str(),
                index.as_str(),
                c.lhs.as_str(),
                c.rhs.as_str(),
                if c.equal { "true" } else { "false" },
            ])
            .expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 input")
    }
}
