mod common;

use common::*;
use mindisc::{parse, render, Ring};
use proptest::prelude::*;

fn ycut() -> Ring {
    Ring::new(&["y1", "y2", "y3", "t"]).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(600))]

    #[test]
    fn render_then_parse_is_identity(p in (1usize..=4).prop_flat_map(|n| poly(n, 8, 6))) {
        let text = render(&p);
        let back = parse(p.ring(), &text).unwrap();
        prop_assert_eq!(back, p);
    }

    #[test]
    fn rendering_is_stable(p in poly(4, 8, 6)) {
        let text = render(&p);
        prop_assert_eq!(render(&parse(p.ring(), &text).unwrap()), text);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn arbitrary_text_never_panics(text in any::<String>()) {
        let r = ycut();
        if let Err(e) = parse(&r, &text) {
            prop_assert!(e.offset <= text.chars().count());
        }
    }

    #[test]
    fn near_miss_grammar_never_panics(text in "[y1-3t+*/^() 0-2-]{0,18}") {
        let r = ycut();
        match parse(&r, &text) {
            Ok(p) => prop_assert_eq!(parse(&r, &render(&p)).unwrap(), p),
            Err(e) => prop_assert!(e.offset <= text.chars().count()),
        }
    }
}
