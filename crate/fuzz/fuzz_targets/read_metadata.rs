#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let text = String::from_utf8_lossy(data);
    if let Ok(meta) = commsat::io::read_metadata(&text) {
        // Decoders behind the parse must also hold up on hostile input.
        let _ = meta.community_partition();
        let _ = meta.solution_assignment();
        let _ = meta.clause_distribution();
    }
});
