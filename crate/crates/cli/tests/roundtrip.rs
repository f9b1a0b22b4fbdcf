use proptest::prelude::*;
use qzec::random::{random_channel, seeded};
use qzec_cli::spec::ChannelSpecFile;
use qzec_cli::PENTAGON_TEMPLATE;

fn reparse(spec: &ChannelSpecFile) -> ChannelSpecFile {
    let text = serde_json::to_string_pretty(spec).unwrap();
    ChannelSpecFile::parse(text.as_bytes(), "roundtrip").unwrap()
}

#[test]
fn pentagon_template_roundtrips() {
    let spec = ChannelSpecFile::parse(PENTAGON_TEMPLATE.as_bytes(), "template").unwrap();
    assert_eq!(reparse(&spec), spec);
    let ch = spec.build(1e-10).unwrap();
    let numeric = ChannelSpecFile::from_channel(&ch);
    let back = reparse(&numeric).build(1e-10).unwrap();
    for (a, b) in ch.operators().iter().zip(back.operators()) {
        assert!(a.max_abs_diff(b) < 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn random_channels_roundtrip(seed in any::<u64>(), d in 1usize..=5, k in 1usize..=4) {
        let ch = random_channel(&mut seeded(seed), d, k);
        let spec = ChannelSpecFile::from_channel(&ch);
        let back = reparse(&spec).build(1e-8).unwrap();
        prop_assert_eq!(back.operators().len(), k);
        for (a, b) in ch.operators().iter().zip(back.operators()) {
            prop_assert!(a.max_abs_diff(b) < 1e-12);
        }
    }
}
