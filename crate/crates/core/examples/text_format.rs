//! The text format and the command-line front end, driven in-process.
//!
//! ```text
//! cargo run --example text_format
//! ```

use apartness::cli;
use apartness::format::Document;

const FILE: &str = "
mealy m
inputs i
outputs a b
states s t u
trans s i a t
trans t i b t
trans u i a u

rel guess on m
pair s u
";

fn main() -> apartness::Result<()> {
    let doc = Document::parse(FILE)?;
    print!("{}", doc.render());
    assert_eq!(Document::parse(&doc.render())?, doc);

    let path = std::env::temp_dir().join("apartness-text-format.fsm");
    std::fs::write(&path, FILE).expect("temp dir is writable");
    let file = path.to_string_lossy().to_string();
    for args in [
        vec!["witness", &file, "m:s", "m:u"],
        vec!["bisim", &file, "m"],
        vec!["simulate", &file, "guess", "--style", "hj"],
    ] {
        println!();
        println!("$ apartness {}", args.join(" "));
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = cli::run(std::iter::once("apartness").chain(args), &mut out, &mut err);
        print!("{}{}", String::from_utf8_lossy(&out), String::from_utf8_lossy(&err));
        println!("exit {code}");
    }
    Ok(())
}
