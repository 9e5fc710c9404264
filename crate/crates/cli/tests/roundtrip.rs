use proptest::prelude::*;

use obsmask::{BlochVector, ComplexMatrix, ObservableCoeffs, C64};
use obsmask_cli::{parse_document, parse_documents, render, render_all, Document};

fn entry() -> impl Strategy<Value = C64> {
    (-1e6f64..1e6, -1e6f64..1e6).prop_map(|(re, im)| C64::new(re, im))
}

fn matrix() -> impl Strategy<Value = Document> {
    (1usize..5, 1usize..5).prop_flat_map(|(r, c)| {
        prop::collection::vec(entry(), r * c)
            .prop_map(move |data| Document::Matrix(ComplexMatrix::new(r, c, data).unwrap()))
    })
}

fn vector() -> impl Strategy<Value = Document> {
    prop::collection::vec(entry(), 1..9).prop_map(Document::Vector)
}

fn coeffs() -> impl Strategy<Value = Document> {
    (2usize..4).prop_flat_map(|d| {
        (any::<f64>().prop_filter("finite", |x| x.is_finite()), prop::collection::vec(-10.0f64..10.0, d * d - 1))
            .prop_map(move |(a0, a)| Document::Coeffs(ObservableCoeffs::new(d, a0, a).unwrap()))
    })
}

fn bloch() -> impl Strategy<Value = Document> {
    (2usize..4).prop_flat_map(|d| {
        prop::collection::vec(-1.0f64..1.0, d * d - 1).prop_map(move |b| Document::Bloch(BlochVector::new(d, b).unwrap()))
    })
}

fn document() -> impl Strategy<Value = Document> {
    prop_oneof![matrix(), vector(), coeffs(), bloch()]
}

proptest! {
    #[test]
    fn parse_inverts_render(doc in document()) {
        let text = render(&doc);
        prop_assert_eq!(parse_document(&text).unwrap(), doc.clone());
        prop_assert_eq!(render(&parse_document(&text).unwrap()), text);
    }

    #[test]
    fn documents_concatenate(docs in prop::collection::vec(document(), 0..5)) {
        prop_assert_eq!(parse_documents(&render_all(&docs)).unwrap(), docs);
    }

    #[test]
    fn comments_are_ignored(doc in document(), note in "[ -~]{0,20}") {
        let text: String = render(&doc).lines().map(|l| format!("{l} # {note}\n\n")).collect();
        prop_assert_eq!(parse_document(&text).unwrap(), doc);
    }

    #[test]
    fn garbage_never_panics(text in "\\PC{0,200}") {
        let _ = parse_documents(&text);
    }
}
