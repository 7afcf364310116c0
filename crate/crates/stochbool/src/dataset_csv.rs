use std::io::Write;

use stochbool_core::accuracy::Dataset;

/// Columns `feature_0..feature_{d-1},response,label`, LF line endings,
/// labels as 0/1.
pub fn write_dataset_csv<W: Write>(ds: &Dataset, out: W) -> anyhow::Result<()> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    let mut header: Vec<String> = (0..ds.dim()).map(|j| format!("feature_{j}")).collect();
    header.extend(["response".to_owned(), "label".to_owned()]);
    w.write_record(&header)?;
    for (i, row) in ds.rows().enumerate() {
        let mut rec: Vec<String> = row.iter().map(f64::to_string).collect();
        rec.push(ds.true_response()[i].to_string());
        rec.push(u8::from(ds.labels()[i]).to_string());
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use stochbool_core::accuracy::generate_dataset;

    #[test]
    fn values_round_trip() {
        let ds = generate_dataset(3, 20, 2).unwrap();
        let mut buf = Vec::new();
        write_dataset_csv(&ds, &mut buf).unwrap();
        let mut r = csv::Reader::from_reader(buf.as_slice());
        assert_eq!(
            r.headers().unwrap(),
            vec!["feature_0", "feature_1", "response", "label"]
        );
        for (i, rec) in r.records().enumerate() {
            let rec = rec.unwrap();
            assert_eq!(rec[0].parse::<f64>().unwrap(), ds.row(i)[0]);
            assert_eq!(rec[2].parse::<f64>().unwrap(), ds.true_response()[i]);
            assert_eq!(&rec[3] == "1", ds.labels()[i]);
        }
    }
}
