//! AnyLite against serde_json on generated JSON text, plus the extension corpus.

use fpsci_core::anyconf::{parse, serialize, serialize_pretty, Value};
use proptest::prelude::*;

fn same(a: &Value, j: &serde_json::Value) -> bool {
    use serde_json::Value as J;
    match (a, j) {
        (Value::Null, J::Null) => true,
        (Value::Bool(x), J::Bool(y)) => x == y,
        (Value::Number(x), J::Number(y)) => {
            let y = y.as_f64().expect("finite");
            x.to_bits() == y.to_bits() || (*x == 0.0 && y == 0.0)
        }
        (Value::Text(x), J::String(y)) => x == y,
        (Value::List(x), J::Array(y)) => x.len() == y.len() && x.iter().zip(y).all(|(a, b)| same(a, b)),
        (Value::Table(x), J::Object(y)) => {
            x.len() == y.len() && x.iter().zip(y).all(|((ka, va), (kb, vb))| ka == kb && same(va, vb))
        }
        _ => false,
    }
}

fn ws() -> impl Strategy<Value = String> {
    prop::collection::vec(prop::sample::select(vec![" ", "\t", "\n", "\r\n"]), 0..3).prop_map(|v| v.concat())
}

fn number_text() -> impl Strategy<Value = String> {
    prop_oneof![
        "-?(0|[1-9][0-9]{0,18})(\\.[0-9]{1,17})?([eE][+-]?[0-9]{1,3})?",
        any::<f64>().prop_filter("finite", |x| x.is_finite()).prop_map(|x| x.to_string()),
        any::<i64>().prop_map(|x| x.to_string()),
    ]
}

fn string_text() -> impl Strategy<Value = String> {
    let piece = prop_oneof![
        4 => "[a-zA-Z0-9 _.:/-]{1,4}",
        1 => prop::sample::select(vec!["\\\"", "\\\\", "\\/", "\\b", "\\f", "\\n", "\\r", "\\t"]).prop_map(String::from),
        1 => any::<u16>().prop_map(|u| format!("\\u{u:04x}")),
        1 => (0xD800u32..0xDC00, 0xDC00u32..0xE000).prop_map(|(h, l)| format!("\\u{h:04X}\\u{l:04X}")),
        1 => any::<char>().prop_filter("plain", |c| *c >= ' ' && *c != '"' && *c != '\\').prop_map(String::from),
    ];
    prop::collection::vec(piece, 0..6).prop_map(|p| format!("\"{}\"", p.concat()))
}

fn json_text() -> impl Strategy<Value = String> {
    let leaf = prop_oneof![
        Just("null".to_owned()),
        Just("true".to_owned()),
        Just("false".to_owned()),
        number_text(),
        string_text(),
    ];
    leaf.prop_recursive(5, 48, 6, |inner| {
        prop_oneof![
            prop::collection::vec((ws(), inner.clone(), ws()), 0..6).prop_map(|items| {
                let body: Vec<String> = items.into_iter().map(|(a, v, b)| format!("{a}{v}{b}")).collect();
                format!("[{}]", body.join(","))
            }),
            prop::collection::btree_map("[a-zA-Z_ ]{0,6}", (ws(), inner, ws()), 0..6).prop_map(|m| {
                let body: Vec<String> = m
                    .into_iter()
                    .map(|(k, (a, v, b))| format!("{a}\"{k}\"{a}:{b}{v}{b}"))
                    .collect();
                format!("{{{}}}", body.join(","))
            }),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1500))]

    #[test]
    fn accepts_and_decodes_like_serde_json(doc in (ws(), json_text(), ws()).prop_map(|(a, d, b)| format!("{a}{d}{b}"))) {
        let ours = parse(&doc);
        let theirs: Result<serde_json::Value, _> = serde_json::from_str(&doc);
        match (&ours, &theirs) {
            (Ok(a), Ok(j)) => prop_assert!(same(a, j), "decode mismatch on {doc:?}"),
            (Err(_), Err(_)) => {}
            _ => prop_assert!(false, "accept/reject mismatch on {doc:?}: ours {:?} theirs {:?}", ours.is_ok(), theirs.is_ok()),
        }
    }

    #[test]
    fn serialized_output_is_json(doc in json_text()) {
        if let Ok(tree) = parse(&doc) {
            for text in [serialize(&tree), serialize_pretty(&tree)] {
                let j: serde_json::Value = serde_json::from_str(&text).expect("plain JSON");
                prop_assert!(same(&tree, &j));
                prop_assert_eq!(parse(&text).unwrap(), tree.clone());
            }
        }
    }

    #[test]
    fn garbage_never_panics(doc in "[\\[\\]{}:=,\"a-z0-9 /*\\n.+-]{0,40}") {
        let _ = parse(&doc);
    }
}

fn tree(src: &str) -> serde_json::Value {
    serde_json::from_str(src).unwrap()
}

#[test]
fn extension_corpus() {
    let cases = [
        ("// leading\n{\"a\": 1}", "{\"a\": 1}"),
        ("{\"a\": 1 /* inline */}", "{\"a\": 1}"),
        ("/* a\n multi-line\n comment */ [true]", "[true]"),
        ("{a: 1, _b2: \"x\"}", "{\"a\": 1, \"_b2\": \"x\"}"),
        ("[1, 2, 3,]", "[1, 2, 3]"),
        ("{\"k\": [null,],}", "{\"k\": [null]}"),
        ("{a = 1, \"b\" = [2]}", "{\"a\": 1, \"b\": [2]}"),
        ("{frameRate = 60, // Hz\n  sessions = [ {id: \"s\", trials: [],}, ], }",
         "{\"frameRate\": 60, \"sessions\": [{\"id\": \"s\", \"trials\": []}]}"),
        ("\"// not a comment\"", "\"// not a comment\""),
        ("{url: \"http://x/*y*/\"}", "{\"url\": \"http://x/*y*/\"}"),
    ];
    for (src, json) in cases {
        let got = parse(src).unwrap_or_else(|e| panic!("{src:?}: {e:?}"));
        assert!(same(&got, &tree(json)), "{src:?}");
    }
}

#[test]
fn extension_rejections() {
    for src in [
        "[1,,]",
        "{,}",
        "[,]",
        "{1a: 2}",
        "{a-b: 1}",
        "{a: 1 /* never closed",
        "{a: 1, a: 2}",
        "{a == 1}",
        "[NaN]",
        "[Infinity]",
        "{'single': 1}",
        "# hash comment\n1",
    ] {
        assert!(parse(src).is_err(), "{src:?} should be rejected");
    }
}

#[test]
fn json_rejections_agree() {
    for src in [
        "01", "1.", ".5", "+1", "-", "1e", "1e+", "\"\\x\"", "\"\\u12\"", "\"a\nb\"", "\"\\uD800\"",
        "\"\\uDC00\"", "\"\\uD800\\u0041\"", "[1 2]", "{\"a\" 1}", "tru", "nul", "[", "]", "", "  ",
        "1e400", "-1e400",
    ] {
        assert!(serde_json::from_str::<serde_json::Value>(src).is_err(), "serde_json accepts {src:?}");
        assert!(parse(src).is_err(), "{src:?} should be rejected");
    }
}
