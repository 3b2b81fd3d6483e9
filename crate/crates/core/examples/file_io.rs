//! Round-trips points, distance matrices, graphs and set-cover instances
//! through their file formats.

use navgraph::dataset::{load_graph, load_matrix, load_points, save_graph, save_matrix, save_points};
use navgraph::instances::{gen_planted_cover, gen_points, PointKind};
use navgraph::navbuild::{build, Algorithm, BuildConfig};
use navgraph::setcover::ExplicitInstance;
use navgraph::{DistanceOracle, Metric};

fn main() -> anyhow::Result<()> {
    let dir = tempfile::tempdir()?;
    let path = |name: &str| dir.path().join(name);

    let points = gen_points(PointKind::Grid, 49, 2, 0)?;
    save_points(&points, path("points.csv"))?;
    let oracle = DistanceOracle::vector(load_points(path("points.csv"), false)?, Metric::Manhattan)?;

    save_matrix(&oracle, path("dist.bin"))?;
    save_matrix(&oracle, path("dist.csv"))?;
    let from_bin = load_matrix(path("dist.bin"))?;
    let from_csv = load_matrix(path("dist.csv"))?;
    assert_eq!(from_bin.table(), from_csv.table());

    let graph = build(&from_bin, Algorithm::Full, &BuildConfig::default())?.graph;
    save_graph(&graph, path("graph.edges"))?;
    assert_eq!(load_graph(path("graph.edges"), graph.len())?, graph);

    let planted = gen_planted_cover(20, 4, 10, 0)?;
    planted.instance.save(path("cover.txt"))?;
    assert_eq!(ExplicitInstance::load(path("cover.txt"))?, planted.instance);

    for entry in std::fs::read_dir(dir.path())? {
        let entry = entry?;
        println!("{:>12} {:>8} bytes", entry.file_name().to_string_lossy(), entry.metadata()?.len());
    }
    println!("first lines of graph.edges:\n{}", graph.to_edge_string().lines().take(3).collect::<Vec<_>>().join("\n"));
    Ok(())
}
