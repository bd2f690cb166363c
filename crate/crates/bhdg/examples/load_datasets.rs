//! Dataset loading: the ARFF + label-XML convention (dense and sparse rows),
//! the CSV fallback with exact round-tripping, and deterministic splits.
//!
//! Run: cargo run --example load_datasets

use bhdg::dataset::{load_arff, load_csv, make_split, save_csv};
use std::fs;

const ARFF: &str = "\
% tiny demonstration set
@relation demo

@attribute width numeric
@attribute height numeric
@attribute area real
@attribute outdoors {0,1}
@attribute nature {0,1}

@data
1.5,2.0,3.0,1,0
0.5,1.0,0.5,0,1
{0 2.5, 3 1, 4 1}
2.0,0.5,1.0,0,0
";

const XML: &str = "\
<?xml version=\"1.0\" encoding=\"utf-8\"?>
<labels xmlns=\"http://mulan.sourceforge.net/labels\">
  <label name=\"outdoors\"></label>
  <label name=\"nature\"></label>
</labels>
";

fn main() -> bhdg::Result<()> {
    let dir = std::env::temp_dir().join("bhdg_load_example");
    fs::create_dir_all(&dir)?;
    let arff_path = dir.join("demo.arff");
    let xml_path = dir.join("demo.xml");
    fs::write(&arff_path, ARFF)?;
    fs::write(&xml_path, XML)?;

    let ds = load_arff(&arff_path, &xml_path)?;
    println!("{ds}");
    println!("features: {:?}", ds.feature_names);
    println!("labels:   {:?}", ds.label_names);
    println!(
        "sparse row expanded: X[2] = {:?}, Y[2] = {:?}",
        ds.x.row(2).to_vec(),
        ds.y.row(2).to_vec()
    );

    // CSV round trip is exact
    let fx = dir.join("demo_x.csv");
    let fy = dir.join("demo_y.csv");
    save_csv(&ds, &fx, &fy)?;
    let back = load_csv(&fx, &fy)?;
    assert_eq!(back.x, ds.x);
    assert_eq!(back.y, ds.y);
    println!("\nCSV round trip: matrices identical bit for bit");

    // deterministic splits round half up
    let split = make_split(ds.n_instances(), 0.5, 7)?;
    println!(
        "split(n=4, 50%, seed=7): train {:?}, test {:?}",
        split.train_indices, split.test_indices
    );
    let again = make_split(ds.n_instances(), 0.5, 7)?;
    assert_eq!(split, again);
    println!("same seed gives the same split");
    Ok(())
}
