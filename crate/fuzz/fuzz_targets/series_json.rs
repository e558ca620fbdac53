#![no_main]
use kinelink::ActivityVectorSeries;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(series) = ActivityVectorSeries::from_json(s) {
        let again = ActivityVectorSeries::from_json(&series.to_json()).expect("written series must parse");
        assert_eq!(series, again);
    }
});
