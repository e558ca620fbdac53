#![no_main]
use kinelink::correlate::{read_rankings_jsonl, write_rankings_jsonl};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(lists) = read_rankings_jsonl(data) {
        let mut out = Vec::new();
        write_rankings_jsonl(&mut out, &lists, None).unwrap();
        assert_eq!(read_rankings_jsonl(out.as_slice()).unwrap(), lists);
    }
});
