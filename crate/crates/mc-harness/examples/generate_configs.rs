//! Regenerate the bundled campaign documents from the programmatic
//! presets. Run from the crate directory:
//!
//! ```text
//! cargo run -p mc-harness --example generate_configs
//! ```

use std::fs;
use std::path::Path;

fn main() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("configs");
    fs::create_dir_all(&dir).expect("create configs dir");

    let benchmark = mc_harness::benchmark_campaign(10_000, 200);
    let mut text = serde_json::to_string_pretty(&benchmark).expect("serialize benchmark campaign");
    text.push('\n');
    fs::write(dir.join("campaign_benchmark.json"), text).expect("write campaign_benchmark.json");

    let toy = mc_harness::toy_campaign(10_000, 500);
    let mut text = serde_json::to_string_pretty(&toy).expect("serialize toy campaign");
    text.push('\n');
    fs::write(dir.join("campaign_toy.json"), text).expect("write campaign_toy.json");

    println!("wrote {}", dir.display());
}
