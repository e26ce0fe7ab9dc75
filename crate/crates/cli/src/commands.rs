use std::fs;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::de::DeserializeOwned;
use serde_json::{json, Value};
use stackelberg_core::discretize::{discretized_se, GridParams, DEFAULT_GRID_CAP};
use stackelberg_core::game::{
    expected_utilities, realized_maximin_profile, solve_maximin, solve_nash_support_enumeration, solve_stackelberg,
    BimatrixGame, Player, NASH_SIZE_LIMIT,
};
use stackelberg_core::gen::{random_3dm, random_3dm_density, random_bimatrix, random_pm};
use stackelberg_core::incentive::{no_incentive_game, solve_stackelberg_incentive, IncentiveInstance, SetId};
use stackelberg_core::matching::{
    approx_leader_strategy, approx_solve, bruteforce_pitim, explicit_bimatrix, extract_3dm, follower_best_response_pm,
    lift_3dm, reduce_3dm, Matching, MatchingMix, PermMatchInstance, ReductionMap, ThreeDmInstance,
    BRUTE_FORCE_EDGE_LIMIT,
};
use stackelberg_core::rng::XorShift64Star;

use crate::error::CliError;
use crate::formats::{BimatrixJson, IncentiveJson, MatchingMixJson, PermMatchJson, ReductionMapJson, ThreeDmJson};
use crate::output::{render, sha256_hex, RunReport};
use crate::{check, Cli, Command, GenKind, Method, PmCommand, ReduceCommand};

/// Largest family the plain (no-incentive) game is built over.
pub const NO_INCENTIVE_FAMILY_LIMIT: usize = 256;
/// Largest matching list the explicit permuted-matching game is built over.
pub const EXPLICIT_MATCHING_LIMIT: usize = 256;
/// Triples a 3DM instance may have and still reduce within the brute-force limit.
pub const VERIFIABLE_TRIPLES: usize = BRUTE_FORCE_EDGE_LIMIT / 2;

type PmRunner = fn(&PermMatchInstance, &PmCommand) -> Result<Value, CliError>;

/// `eps = num / den` in lowest terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Eps {
    pub num: u64,
    pub den: u64,
}

impl Eps {
    /// Accepts `p/q` or a plain decimal such as `0.01`.
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let bad = || CliError::input(format!("cannot read eps {text:?}; expected p/q or a decimal"));
        let (num, den) = match text.split_once('/') {
            Some((p, q)) => (
                p.trim().parse().map_err(|_| bad())?,
                q.trim().parse().map_err(|_| bad())?,
            ),
            None => {
                let (whole, frac) = text.trim().split_once('.').unwrap_or((text.trim(), ""));
                if frac.len() > 18 || !frac.bytes().all(|b| b.is_ascii_digit()) {
                    return Err(bad());
                }
                let den = 10u64.pow(frac.len() as u32);
                let digits = format!("{whole}{frac}");
                (digits.parse().map_err(|_| bad())?, den)
            }
        };
        if num == 0 || den == 0 {
            return Err(CliError::input("eps must be positive"));
        }
        let g = gcd(num, den);
        Ok(Self {
            num: num / g,
            den: den / g,
        })
    }

    pub fn value(self) -> f64 {
        self.num as f64 / self.den as f64
    }

    fn label(self) -> String {
        format!("{}/{}", self.num, self.den)
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

struct Input {
    bytes: Vec<u8>,
}

impl Input {
    fn read(path: &Path) -> Result<Self, CliError> {
        let mut bytes = Vec::new();
        let result = if path.as_os_str() == "-" {
            std::io::stdin().read_to_end(&mut bytes).map(|_| ())
        } else {
            fs::File::open(path).and_then(|mut f| f.read_to_end(&mut bytes).map(|_| ()))
        };
        result.map_err(|e| CliError::input(format!("cannot read {}: {e}", path.display())))?;
        Ok(Self { bytes })
    }

    fn parse<T: DeserializeOwned>(&self) -> Result<T, CliError> {
        Ok(serde_json::from_slice(&self.bytes)?)
    }

    fn digest(&self) -> String {
        sha256_hex(&self.bytes)
    }
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|e| CliError::internal(format!("cannot write {}: {e}", path.display())))
}

fn emit(cli: &Cli, text: &str) -> Result<(), CliError> {
    match &cli.output {
        Some(path) => write_file(path, text),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| CliError::internal(format!("cannot write to stdout: {e}"))),
    }
}

pub fn run(cli: &Cli, argv: Vec<String>) -> Result<(), CliError> {
    let start = Instant::now();
    let (input, result) = match &cli.command {
        Command::SolveBimatrix { input, method, eps } => {
            let eps = match (method, eps) {
                (Method::Discretize, Some(e)) => Some(Eps::parse(e)?),
                (Method::Discretize, None) => return Err(CliError::input("--method discretize needs --eps")),
                (_, Some(_)) => return Err(CliError::input("--eps only applies to --method discretize")),
                (_, None) => None,
            };
            let input = Input::read(&input.input)?;
            let game = input.parse::<BimatrixJson>()?.to_game()?;
            let result = solve_bimatrix(&game, *method, eps)?;
            (Some(input), result)
        }
        Command::Discretize { input, eps } => {
            let eps = Eps::parse(eps)?;
            let input = Input::read(&input.input)?;
            let game = input.parse::<BimatrixJson>()?.to_game()?;
            let result = solve_bimatrix(&game, Method::Discretize, Some(eps))?;
            (Some(input), result)
        }
        Command::SolveIncentive { input, no_incentives } => {
            let input = Input::read(&input.input)?;
            let inst = input.parse::<IncentiveJson>()?.to_instance()?;
            let result = if *no_incentives {
                solve_without_incentives(&inst)?
            } else {
                solve_incentive(&inst)?
            };
            (Some(input), result)
        }
        Command::Pm { sub } => {
            let (path, result): (&Path, PmRunner) = match sub {
                PmCommand::Approx { input, .. } => (&input.input, pm_approx),
                PmCommand::Bruteforce { input } => (&input.input, pm_bruteforce),
                PmCommand::Bestresponse { input, .. } => (&input.input, pm_best_response),
            };
            let input = Input::read(path)?;
            let inst = input.parse::<PermMatchJson>()?.to_instance()?;
            let result = result(&inst, sub)?;
            (Some(input), result)
        }
        Command::Reduce {
            sub: ReduceCommand::ThreeDmToPm { input },
        } => {
            let out = cli
                .output
                .as_ref()
                .ok_or_else(|| CliError::input("reduce needs -o/--output for the reduced instance"))?;
            let input = Input::read(&input.input)?;
            let tdm = input.parse::<ThreeDmJson>()?.to_instance()?;
            let result = reduce(&tdm, out, cli.json_indent)?;
            let report = report(argv, Some(&input), result, cli.timing.then(|| start.elapsed()));
            return std::io::stdout()
                .write_all(render(&report, cli.json_indent)?.as_bytes())
                .map_err(|e| CliError::internal(e.to_string()));
        }
        Command::Gen { kind } => {
            let text = render(&generate(kind)?, cli.json_indent)?;
            return match &cli.output {
                None => emit(cli, &text),
                Some(path) => {
                    write_file(path, &text)?;
                    let result = json!({"output": path.display().to_string(), "sha256": sha256_hex(text.as_bytes())});
                    let report = report(argv, None, result, cli.timing.then(|| start.elapsed()));
                    std::io::stdout()
                        .write_all(render(&report, cli.json_indent)?.as_bytes())
                        .map_err(|e| CliError::internal(e.to_string()))
                }
            };
        }
    };
    let report = report(argv, input.as_ref(), result, cli.timing.then(|| start.elapsed()));
    emit(cli, &render(&report, cli.json_indent)?)
}

fn report(argv: Vec<String>, input: Option<&Input>, result: Value, elapsed: Option<std::time::Duration>) -> RunReport {
    RunReport {
        command: argv,
        version: env!("CARGO_PKG_VERSION"),
        input_sha256: input.map(Input::digest),
        result,
        wall_time_ms: elapsed.map(|d| d.as_secs_f64() * 1e3),
    }
}

pub fn solve_bimatrix(game: &BimatrixGame, method: Method, eps: Option<Eps>) -> Result<Value, CliError> {
    match method {
        Method::Se => {
            let sol = solve_stackelberg(game)?;
            check::stackelberg(game, &sol)?;
            Ok(json!({
                "method": "se",
                "leader": sol.leader.probs(),
                "followerResponse": sol.follower_response,
                "leaderPayoff": sol.leader_payoff,
                "followerPayoff": sol.follower_payoff,
            }))
        }
        Method::Nash => {
            let mut profiles = Vec::new();
            for (x, y) in solve_nash_support_enumeration(game)? {
                check::nash(game, &x, &y)?;
                let (lead, foll) = expected_utilities(game, &x, &y)?;
                profiles.push(json!({
                    "leader": x.probs(),
                    "follower": y.probs(),
                    "leaderPayoff": lead,
                    "followerPayoff": foll,
                }));
            }
            Ok(json!({"method": "nash", "equilibria": profiles}))
        }
        Method::Maximin => {
            let profile = realized_maximin_profile(game)?;
            check::maximin(game, &profile)?;
            let (_, leader_value) = solve_maximin(game, Player::Leader)?;
            let (_, follower_value) = solve_maximin(game, Player::Follower)?;
            Ok(json!({
                "method": "maximin",
                "leader": profile.leader.probs(),
                "follower": profile.follower.probs(),
                "leaderPayoff": profile.leader_payoff,
                "followerPayoff": profile.follower_payoff,
                "leaderSecurityValue": leader_value,
                "followerSecurityValue": follower_value,
            }))
        }
        Method::Discretize => {
            let eps = eps.ok_or_else(|| CliError::input("discretize needs --eps"))?;
            let params = GridParams::from_ratio(eps.num, eps.den)?;
            let sol = discretized_se(game, params, DEFAULT_GRID_CAP)?;
            check::discretized(game, &sol)?;
            Ok(json!({
                "method": "discretize",
                "eps": eps.label(),
                "k": sol.k,
                "leader": sol.leader.probs(),
                "numerators": sol.numerators,
                "followerResponse": sol.follower_response,
                "leaderPayoff": sol.leader_payoff,
                "followerPayoff": sol.follower_payoff,
                "bestResponsePayoff": sol.best_response_payoff,
                "slack": sol.slack,
                "M": sol.max_abs_payoff,
                "gridSize": sol.grid_size,
                "candidatesExamined": sol.candidates_examined,
            }))
        }
    }
}

fn element_ids(inst: &IncentiveInstance, members: &[usize]) -> Vec<String> {
    members.iter().map(|&i| inst.elements()[i].id.clone()).collect()
}

fn named_x(inst: &IncentiveInstance, x: &[f64]) -> Vec<Value> {
    inst.elements()
        .iter()
        .zip(x)
        .map(|(e, p)| json!({"id": e.id, "p": p}))
        .collect()
}

pub fn solve_incentive(inst: &IncentiveInstance) -> Result<Value, CliError> {
    let sol = solve_stackelberg_incentive(inst)?;
    check::incentive(inst, &sol)?;
    let members = inst.members(&sol.target_set)?;
    let mut target = json!({"elements": element_ids(inst, &members)});
    if let SetId::Listed(i) = sol.target_set {
        target["index"] = json!(i);
    }
    Ok(json!({
        "x": named_x(inst, sol.strategy.x()),
        "W": sol.w,
        "target": target,
        "V": sol.incentive,
        "leaderPayoff": sol.leader_payoff,
        "followerPayoff": sol.follower_payoff,
        "incentiveBoxExceeded": sol.incentive_box_exceeded,
    }))
}

pub fn solve_without_incentives(inst: &IncentiveInstance) -> Result<Value, CliError> {
    let (game, sets) = no_incentive_game(inst, NO_INCENTIVE_FAMILY_LIMIT)?;
    let sol = solve_stackelberg(&game)?;
    check::stackelberg(&game, &sol)?;
    Ok(json!({
        "mode": "no-incentives",
        "familySize": sets.len(),
        "x": named_x(inst, sol.leader.probs()),
        "followerSet": element_ids(inst, &sets[sol.follower_response]),
        "leaderPayoff": sol.leader_payoff,
        "followerPayoff": sol.follower_payoff,
    }))
}

fn mix_json(mix: &MatchingMix) -> Value {
    serde_json::to_value(MatchingMixJson::from_mix(mix)).expect("plain data serializes")
}

fn pm_approx(inst: &PermMatchInstance, cmd: &PmCommand) -> Result<Value, CliError> {
    let PmCommand::Approx { eps, .. } = cmd else {
        unreachable!()
    };
    let eps = Eps::parse(eps)?;
    let sol = approx_solve(inst, eps.value())?;
    check::pm_approx(inst, &sol)?;
    Ok(json!({
        "eps": eps.label(),
        "x": sol.x.edges(),
        "xPrime": sol.x_prime.edges(),
        "shared": sol.shared,
        "strategy": mix_json(&sol.strategy),
        "followerResponse": sol.follower.matching.edges(),
        "leaderFavoring": sol.follower.leader_favoring,
        "leaderPayoff": sol.leader_payoff,
        "followerPayoff": sol.follower_payoff,
        "guaranteeFactor": sol.guarantee_factor,
        "payoffFloor": sol.payoff_floor,
        "floorMet": sol.leader_payoff >= sol.payoff_floor - 1e-9,
    }))
}

fn pm_bruteforce(inst: &PermMatchInstance, _: &PmCommand) -> Result<Value, CliError> {
    let (best, value) = bruteforce_pitim(inst)?;
    check::pitim(inst, &best, value)?;
    let (game, list) = explicit_bimatrix(inst, EXPLICIT_MATCHING_LIMIT)?;
    let se = solve_stackelberg(&game)?;
    check::stackelberg(&game, &se)?;
    let support: Vec<Value> = list
        .iter()
        .zip(se.leader.probs())
        .filter(|(_, &p)| p > 0.0)
        .map(|(m, p)| json!({"edges": m.edges(), "p": p}))
        .collect();
    Ok(json!({
        "pitimValue": value,
        "matching": best.edges(),
        "matchingCount": list.len(),
        "se": {
            "leaderPayoff": se.leader_payoff,
            "followerPayoff": se.follower_payoff,
            "leader": {"support": support},
            "followerResponse": list[se.follower_response].edges(),
        },
    }))
}

fn pm_best_response(inst: &PermMatchInstance, cmd: &PmCommand) -> Result<Value, CliError> {
    let PmCommand::Bestresponse { strategy, eps, .. } = cmd else {
        unreachable!()
    };
    let mix = match strategy {
        Some(path) => Input::read(path)?.parse::<MatchingMixJson>()?.to_mix(inst)?,
        None => approx_leader_strategy(inst, Eps::parse(eps)?.value())?,
    };
    let response = follower_best_response_pm(inst, &mix)?;
    let m = Matching::new(inst.graph(), response.matching.edges().to_vec())?;
    let (lead, foll) = stackelberg_core::matching::expected_pm_utilities(inst, &mix, &m);
    Ok(json!({
        "strategy": mix_json(&mix),
        "response": m.edges(),
        "leaderFavoring": response.leader_favoring,
        "leaderPayoff": lead,
        "followerPayoff": foll,
    }))
}

fn sidecar_path(out: &Path) -> PathBuf {
    let name = out
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_default();
    let stem = name.strip_suffix(".json").unwrap_or(&name);
    out.with_file_name(format!("{stem}.map.json"))
}

/// Lift then extract must give back the same triples, for the empty
/// selection, every single triple and one greedy maximal matching.
fn verify_round_trip(tdm: &ThreeDmInstance, inst: &PermMatchInstance, map: &ReductionMap) -> Result<usize, CliError> {
    let fail = |what: String| CliError::internal(format!("reduction round trip failed: {what}"));
    if inst.num_edges() != 2 * tdm.triples.len() {
        return Err(fail("edge count".into()));
    }
    for t in 0..tdm.triples.len() {
        if inst.pi().apply(2 * t) != 2 * t + 1 || inst.pi().apply(2 * t + 1) != 2 * t {
            return Err(fail(format!("pi does not swap the edges of triple {t}")));
        }
    }
    let mut greedy = Vec::new();
    for t in 0..tdm.triples.len() {
        greedy.push(t);
        if tdm.check_matching(&greedy).is_err() {
            greedy.pop();
        }
    }
    let mut selections: Vec<Vec<usize>> = vec![Vec::new(), greedy];
    selections.extend((0..tdm.triples.len()).map(|t| vec![t]));
    for selected in &selections {
        let lifted = lift_3dm(map, selected)?;
        if extract_3dm(map, &lifted)? != *selected {
            return Err(fail(format!("triples {selected:?}")));
        }
    }
    Ok(selections.len())
}

fn reduce(tdm: &ThreeDmInstance, out: &Path, indent: usize) -> Result<Value, CliError> {
    let (inst, map) = reduce_3dm(tdm);
    let checked = verify_round_trip(tdm, &inst, &map)?;
    let sidecar = sidecar_path(out);
    write_file(out, &render(&PermMatchJson::from_instance(&inst), indent)?)?;
    write_file(&sidecar, &render(&ReductionMapJson::from_map(&map), indent)?)?;
    Ok(json!({
        "output": out.display().to_string(),
        "sidecar": sidecar.display().to_string(),
        "vertices": inst.graph().num_vertices(),
        "edges": inst.num_edges(),
        "roundTripsChecked": checked,
    }))
}

pub fn generate(kind: &GenKind) -> Result<Value, CliError> {
    let to_value = |v: Result<Value, serde_json::Error>| v.map_err(|e| CliError::internal(e.to_string()));
    match *kind {
        GenKind::RandomBimatrix {
            seed,
            rows,
            cols,
            verifiable,
        } => {
            if rows == 0 || cols == 0 {
                return Err(CliError::input("rows and cols must be positive"));
            }
            if verifiable && (rows > NASH_SIZE_LIMIT || cols > NASH_SIZE_LIMIT) {
                return Err(CliError::input(format!(
                    "--verifiable allows at most {NASH_SIZE_LIMIT} rows and columns"
                )));
            }
            let game = random_bimatrix(&mut XorShift64Star::new(seed), rows, cols);
            to_value(serde_json::to_value(BimatrixJson::from_game(&game)))
        }
        GenKind::RandomPm {
            seed,
            vertices,
            edges,
            verifiable,
        } => {
            if edges > 0 && vertices < 2 {
                return Err(CliError::input("edges need at least two vertices"));
            }
            if verifiable && edges > BRUTE_FORCE_EDGE_LIMIT {
                return Err(CliError::input(format!(
                    "--verifiable allows at most {BRUTE_FORCE_EDGE_LIMIT} edges"
                )));
            }
            let inst = random_pm(&mut XorShift64Star::new(seed), vertices, edges);
            to_value(serde_json::to_value(PermMatchJson::from_instance(&inst)))
        }
        GenKind::Random3dm {
            seed,
            na,
            nb,
            nc,
            count,
            density,
            verifiable,
        } => {
            let mut rng = XorShift64Star::new(seed);
            let tdm = match (count, density) {
                (Some(count), None) => random_3dm(&mut rng, na, nb, nc, count),
                (None, Some(d)) if (0.0..=1.0).contains(&d) => random_3dm_density(&mut rng, na, nb, nc, d),
                (None, Some(_)) => return Err(CliError::input("density must lie in [0, 1]")),
                _ => return Err(CliError::input("give exactly one of --count and --density")),
            };
            if verifiable && tdm.triples.len() > VERIFIABLE_TRIPLES {
                return Err(CliError::input(format!(
                    "--verifiable allows at most {VERIFIABLE_TRIPLES} triples, got {}",
                    tdm.triples.len()
                )));
            }
            to_value(serde_json::to_value(ThreeDmJson::from_instance(&tdm)))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eps_forms() {
        assert_eq!(Eps::parse("1/100").unwrap(), Eps { num: 1, den: 100 });
        assert_eq!(Eps::parse("2/8").unwrap(), Eps { num: 1, den: 4 });
        assert_eq!(Eps::parse("0.01").unwrap(), Eps { num: 1, den: 100 });
        assert_eq!(Eps::parse("0.25").unwrap(), Eps { num: 1, den: 4 });
        for bad in ["", "0", "1/0", "x/3", "0.1.2", "-0.1"] {
            assert!(Eps::parse(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn sidecar_names() {
        assert_eq!(
            sidecar_path(Path::new("out/red.json")),
            PathBuf::from("out/red.map.json")
        );
        assert_eq!(sidecar_path(Path::new("red")), PathBuf::from("red.map.json"));
    }
}
