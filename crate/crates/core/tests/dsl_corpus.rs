//! Golden and negative corpora for the curve language.

use dualcurve::dsl::{format, parse, parse_curve};
use dualcurve::{Domain, DualCurve, DualVec3};

const GOLDEN: &str = include_str!("corpus/golden.txt");
const NEGATIVE: &str = include_str!("corpus/negative.txt");

fn entries(text: &str) -> impl Iterator<Item = (&str, &str)> {
    text.lines()
        .filter(|l| !l.trim().is_empty() && !l.starts_with('#'))
        .map(|l| l.split_once(" | ").expect("corpus line needs ' | '"))
}

fn golden() -> Vec<(Domain, &'static str)> {
    entries(GOLDEN)
        .map(|(dom, src)| {
            let mut it = dom.split_whitespace().map(|x| x.parse::<f64>().unwrap());
            (Domain::new(it.next().unwrap(), it.next().unwrap()).unwrap(), src)
        })
        .collect()
}

#[test]
fn golden_corpus_round_trips() {
    let corpus = golden();
    assert!(corpus.len() >= 20);
    for (_, src) in corpus {
        let ast = parse(src).unwrap_or_else(|e| panic!("{src}: {}", e.render(src)));
        let text = format(&ast);
        assert_eq!(parse(&text).unwrap(), ast, "{src} -> {text}");
        assert_eq!(format(&parse(&text).unwrap()), text);
    }
}

fn rel_err(fd: &DualVec3, exact: &DualVec3) -> f64 {
    fd.max_abs_diff(exact) / exact.max_abs().max(1.0)
}

fn check_derivatives(curve: &DualCurve, t: f64) -> f64 {
    let h = 1e-5;
    let p = curve.eval(t).unwrap();
    let (a, b) = (curve.eval(t + h).unwrap(), curve.eval(t - h).unwrap());
    let inv = dualcurve::DualScalar::real(0.5 / h);
    let d1 = (a.pos - b.pos).scale(inv);
    let d2 = (a.d1 - b.d1).scale(inv);
    let d3 = (a.d2 - b.d2).scale(inv);
    rel_err(&d1, &p.d1).max(rel_err(&d2, &p.d2)).max(rel_err(&d3, &p.d3))
}

#[test]
fn golden_jets_match_finite_differences() {
    for (dom, src) in golden() {
        let curve = parse_curve(src, dom).unwrap();
        for i in 1..6 {
            let t = dom.min + dom.len() * i as f64 / 6.0;
            let err = check_derivatives(&curve, t);
            assert!(err <= 1e-5, "{src} at t = {t}: relative error {err:e}");
        }
    }
}

#[test]
fn negative_corpus_is_located() {
    let cases: Vec<_> = entries(NEGATIVE).collect();
    assert!(cases.len() >= 10);
    for (offset, src) in cases {
        let want: usize = offset.trim().parse().unwrap();
        let err = parse(src).expect_err(src);
        assert_eq!(err.offset, want, "{src}: {err}");
        assert_eq!(err.line, 1);
        assert_eq!(err.column, want + 1);
        assert!(!err.expected.is_empty(), "{src}: no expected set");
        assert!(err.render(src).contains('^'));
    }
}
