//! Text renderings of proofs.

use std::fmt::Write;

use crate::calculus::{Proof, RuleId};
use crate::formula::{Formula, Symbols};
use crate::sequent::Sequent;

/// One line per rule application, conclusion first, premises indented below it.
///
/// ```text
/// q, p => p  [WL]
///   p => p  [Axiom]
/// ```
pub fn render_ascii(p: &Proof) -> String {
    let mut out = String::new();
    ascii_rec(p, 0, &mut out);
    out
}

fn ascii_rec(p: &Proof, depth: usize, out: &mut String) {
    let _ = writeln!(
        out,
        "{:width$}{}  [{}]",
        "",
        p.conclusion,
        p.rule,
        width = depth * 2
    );
    for c in &p.premises {
        ascii_rec(c, depth + 1, out);
    }
}

const LATEX: Symbols = Symbols {
    neg: "\\neg ",
    conj: " \\land ",
    disj: " \\lor ",
    imp: " \\to ",
    lparen: "(",
    rparen: ")",
};

pub fn latex_formula(f: &Formula) -> String {
    let mut s = String::new();
    f.write_with(&mut s, &LATEX, 0);
    s
}

pub fn latex_sequent(s: &Sequent) -> String {
    let side = |xs: &[Formula]| xs.iter().map(latex_formula).collect::<Vec<_>>().join(", ");
    let (a, b) = (side(&s.ante), side(&s.succ));
    match (a.is_empty(), b.is_empty()) {
        (true, true) => "\\Rightarrow".to_string(),
        (true, false) => format!("\\Rightarrow {b}"),
        (false, true) => format!("{a} \\Rightarrow"),
        (false, false) => format!("{a} \\Rightarrow {b}"),
    }
}

fn latex_label(r: RuleId) -> &'static str {
    match r {
        RuleId::Axiom => "Ax",
        RuleId::WL => "W$_L$",
        RuleId::WR => "W$_R$",
        RuleId::CL => "C$_L$",
        RuleId::CR => "C$_R$",
        RuleId::EL => "E$_L$",
        RuleId::ER => "E$_R$",
        RuleId::NegL => "$\\neg$L",
        RuleId::NegR => "$\\neg$R",
        RuleId::ConjLLeft => "$\\land$L$_1$",
        RuleId::ConjLRight => "$\\land$L$_2$",
        RuleId::ConjR => "$\\land$R",
        RuleId::DisjL => "$\\lor$L",
        RuleId::DisjRLeft => "$\\lor$R$_1$",
        RuleId::DisjRRight => "$\\lor$R$_2$",
        RuleId::ImplL => "$\\to$L",
        RuleId::ImplR => "$\\to$R",
        RuleId::CutAdditive => "Cut",
        RuleId::CutMultiplicative => "Mcut",
    }
}

/// A `bussproofs` environment.
pub fn render_latex(p: &Proof) -> String {
    let mut out = String::from("\\begin{prooftree}\n");
    latex_rec(p, &mut out);
    out.push_str("\\end{prooftree}\n");
    out
}

fn latex_rec(p: &Proof, out: &mut String) {
    let seq = latex_sequent(&p.conclusion);
    if p.rule == RuleId::Axiom {
        let _ = writeln!(out, "\\AxiomC{{$ {seq} $}}");
        return;
    }
    for c in &p.premises {
        latex_rec(c, out);
    }
    let inf = if p.premises.len() == 2 {
        "BinaryInfC"
    } else {
        "UnaryInfC"
    };
    let _ = writeln!(out, "\\RightLabel{{\\scriptsize {}}}", latex_label(p.rule));
    let _ = writeln!(out, "\\{inf}{{$ {seq} $}}");
}
