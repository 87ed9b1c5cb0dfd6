//! Simplified travel tasks: planes ferry passengers between cities.
//!
//! Two families: a rendezvous map (four corner cities around a center, the
//! goal gathers every passenger at the center) and a chain of cities whose
//! end passengers must swap places. Flying dwarfs boarding in cost, which
//! puts the cost ratio epsilon far below 1.

use super::strips::{FactSet, GroundedTask, StripsAction};
use crate::graph::Cost;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TravelError {
    #[error("need at least one passenger")]
    NoPassengers,
    #[error("need at least one plane")]
    NoPlanes,
    #[error("chain needs at least 2 cities")]
    ChainTooShort,
    #[error("all costs must be >= 1")]
    ZeroCost,
}

/// Rendezvous map: corners a, b, c, d in a ring around `center`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RendezvousConfig {
    pub passengers: u32,
    pub planes: u32,
    /// Corner-to-center edges.
    pub diagonal_cost: Cost,
    /// Corner-to-adjacent-corner ring edges.
    pub exterior_cost: Cost,
    pub board_cost: Cost,
    pub debark_cost: Cost,
}

impl RendezvousConfig {
    pub fn new(passengers: u32, planes: u32) -> Self {
        RendezvousConfig {
            passengers,
            planes,
            diagonal_cost: 7000,
            exterior_cost: 10000,
            board_cost: 1,
            debark_cost: 1,
        }
    }
}

/// Chain map: cities c1..cm in a line; passengers at the two ends must swap.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ChainSwapConfig {
    pub chain_length: u32,
    pub fly_cost: Cost,
    pub board_cost: Cost,
    pub debark_cost: Cost,
}

impl ChainSwapConfig {
    pub fn new(chain_length: u32) -> Self {
        ChainSwapConfig {
            chain_length,
            fly_cost: 1000,
            board_cost: 1,
            debark_cost: 1,
        }
    }
}

struct TravelBuilder {
    facts: Vec<String>,
    actions: Vec<StripsAction>,
    cities: Vec<String>,
    passengers: Vec<String>,
    planes: Vec<String>,
}

impl TravelBuilder {
    fn new(cities: Vec<String>, passengers: u32, planes: u32) -> Self {
        let passengers = (1..=passengers).map(|i| format!("p{i}")).collect();
        let planes = (1..=planes).map(|i| format!("q{i}")).collect();
        let mut b = TravelBuilder {
            facts: Vec::new(),
            actions: Vec::new(),
            cities,
            passengers,
            planes,
        };
        // Fact layout: at(pax, city) blocks, then in(pax, plane) blocks,
        // then at(plane, city) blocks.
        for p in b.passengers.clone() {
            for c in b.cities.clone() {
                b.facts.push(format!("at-{p}-{c}"));
            }
        }
        for p in b.passengers.clone() {
            for q in b.planes.clone() {
                b.facts.push(format!("in-{p}-{q}"));
            }
        }
        for q in b.planes.clone() {
            for c in b.cities.clone() {
                b.facts.push(format!("plane-{q}-{c}"));
            }
        }
        b
    }

    fn pax_at(&self, pax: usize, city: usize) -> u32 {
        (pax * self.cities.len() + city) as u32
    }

    fn pax_in(&self, pax: usize, plane: usize) -> u32 {
        (self.passengers.len() * self.cities.len() + pax * self.planes.len() + plane) as u32
    }

    fn plane_at(&self, plane: usize, city: usize) -> u32 {
        (self.passengers.len() * self.cities.len()
            + self.passengers.len() * self.planes.len()
            + plane * self.cities.len()
            + city) as u32
    }

    /// Fly actions for every plane over every directed edge, in edge order.
    fn add_fly_actions(&mut self, edges: &[(usize, usize, Cost)]) {
        for q in 0..self.planes.len() {
            for &(from, to, cost) in edges {
                for (a, b) in [(from, to), (to, from)] {
                    self.actions.push(StripsAction {
                        name: format!(
                            "fly-{}-{}-{}",
                            self.planes[q], self.cities[a], self.cities[b]
                        ),
                        cost,
                        pre: FactSet::from_indices(&[self.plane_at(q, a)]),
                        add: FactSet::from_indices(&[self.plane_at(q, b)]),
                        del: FactSet::from_indices(&[self.plane_at(q, a)]),
                    });
                }
            }
        }
    }

    fn add_board_debark(&mut self, board_cost: Cost, debark_cost: Cost) {
        for p in 0..self.passengers.len() {
            for q in 0..self.planes.len() {
                for c in 0..self.cities.len() {
                    self.actions.push(StripsAction {
                        name: format!(
                            "board-{}-{}-{}",
                            self.passengers[p], self.planes[q], self.cities[c]
                        ),
                        cost: board_cost,
                        pre: FactSet::from_indices(&[self.pax_at(p, c), self.plane_at(q, c)]),
                        add: FactSet::from_indices(&[self.pax_in(p, q)]),
                        del: FactSet::from_indices(&[self.pax_at(p, c)]),
                    });
                }
            }
        }
        for p in 0..self.passengers.len() {
            for q in 0..self.planes.len() {
                for c in 0..self.cities.len() {
                    self.actions.push(StripsAction {
                        name: format!(
                            "debark-{}-{}-{}",
                            self.passengers[p], self.planes[q], self.cities[c]
                        ),
                        cost: debark_cost,
                        pre: FactSet::from_indices(&[self.pax_in(p, q), self.plane_at(q, c)]),
                        add: FactSet::from_indices(&[self.pax_at(p, c)]),
                        del: FactSet::from_indices(&[self.pax_in(p, q)]),
                    });
                }
            }
        }
    }
}

/// Four corners and a center. Passengers and planes start round-robin over
/// the corners; the goal is every passenger at the center.
pub fn rendezvous_task(cfg: &RendezvousConfig) -> Result<GroundedTask, TravelError> {
    if cfg.passengers == 0 {
        return Err(TravelError::NoPassengers);
    }
    if cfg.planes == 0 {
        return Err(TravelError::NoPlanes);
    }
    if [cfg.diagonal_cost, cfg.exterior_cost, cfg.board_cost, cfg.debark_cost]
        .iter()
        .any(|&c| c == 0)
    {
        return Err(TravelError::ZeroCost);
    }
    let cities: Vec<String> = ["a", "b", "c", "d", "center"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    const CENTER: usize = 4;
    let mut b = TravelBuilder::new(cities, cfg.passengers, cfg.planes);
    // Ring a-b-c-d plus diagonals into the center.
    let edges = [
        (0, 1, cfg.exterior_cost),
        (1, 2, cfg.exterior_cost),
        (2, 3, cfg.exterior_cost),
        (3, 0, cfg.exterior_cost),
        (0, CENTER, cfg.diagonal_cost),
        (1, CENTER, cfg.diagonal_cost),
        (2, CENTER, cfg.diagonal_cost),
        (3, CENTER, cfg.diagonal_cost),
    ];
    b.add_fly_actions(&edges);
    b.add_board_debark(cfg.board_cost, cfg.debark_cost);

    let mut init = FactSet::empty();
    for p in 0..cfg.passengers as usize {
        init.insert(b.pax_at(p, p % 4));
    }
    for q in 0..cfg.planes as usize {
        init.insert(b.plane_at(q, q % 4));
    }
    let mut goal = FactSet::empty();
    for p in 0..cfg.passengers as usize {
        goal.insert(b.pax_at(p, CENTER));
    }
    let task = GroundedTask {
        name: format!("rendezvous-p{}-q{}", cfg.passengers, cfg.planes),
        facts: b.facts,
        init,
        goal,
        actions: b.actions,
    };
    task.validate().expect("builder produces valid tasks");
    Ok(task)
}

/// Cities in a line with a plane at each end; the end passengers swap.
pub fn chain_swap_task(cfg: &ChainSwapConfig) -> Result<GroundedTask, TravelError> {
    if cfg.chain_length < 2 {
        return Err(TravelError::ChainTooShort);
    }
    if [cfg.fly_cost, cfg.board_cost, cfg.debark_cost]
        .iter()
        .any(|&c| c == 0)
    {
        return Err(TravelError::ZeroCost);
    }
    let m = cfg.chain_length as usize;
    let cities: Vec<String> = (1..=m).map(|i| format!("c{i}")).collect();
    let mut b = TravelBuilder::new(cities, 2, 2);
    let edges: Vec<(usize, usize, Cost)> =
        (0..m - 1).map(|i| (i, i + 1, cfg.fly_cost)).collect();
    b.add_fly_actions(&edges);
    b.add_board_debark(cfg.board_cost, cfg.debark_cost);

    let mut init = FactSet::empty();
    init.insert(b.pax_at(0, 0));
    init.insert(b.pax_at(1, m - 1));
    init.insert(b.plane_at(0, 0));
    init.insert(b.plane_at(1, m - 1));
    let mut goal = FactSet::empty();
    goal.insert(b.pax_at(0, m - 1));
    goal.insert(b.pax_at(1, 0));
    let task = GroundedTask {
        name: format!("chain-swap-m{}", cfg.chain_length),
        facts: b.facts,
        init,
        goal,
        actions: b.actions,
    };
    task.validate().expect("builder produces valid tasks");
    Ok(task)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domains::strips::ground_problem;
    use crate::graph::{epsilon_of, SearchProblem};
    use num_rational::Ratio;

    #[test]
    fn rendezvous_epsilon_is_one_ten_thousandth() {
        let task = rendezvous_task(&RendezvousConfig::new(2, 1)).unwrap();
        let problem = ground_problem(task).unwrap();
        assert_eq!(epsilon_of(&problem).unwrap(), Ratio::new(1, 10000));
    }

    #[test]
    fn rendezvous_rejects_zero_passengers() {
        assert_eq!(
            rendezvous_task(&RendezvousConfig::new(0, 1)),
            Err(TravelError::NoPassengers)
        );
    }

    #[test]
    fn rendezvous_goal_when_already_there() {
        // One passenger placed at the center by hand: empty plan suffices.
        let cfg = RendezvousConfig::new(1, 1);
        let mut task = rendezvous_task(&cfg).unwrap();
        // Move p1 from corner a to the center in the init.
        let at_a = task.facts.iter().position(|f| f == "at-p1-a").unwrap() as u32;
        let at_center = task
            .facts
            .iter()
            .position(|f| f == "at-p1-center")
            .unwrap() as u32;
        task.init.remove(at_a);
        task.init.insert(at_center);
        assert!(task.goal_holds(&task.init));
    }

    #[test]
    fn chain_swap_layout() {
        let task = chain_swap_task(&ChainSwapConfig::new(3)).unwrap();
        let problem = ground_problem(task.clone()).unwrap();
        assert!(task.facts.iter().any(|f| f == "at-p1-c1"));
        assert!(task.init.contains(
            task.facts.iter().position(|f| f == "at-p2-c3").unwrap() as u32
        ));
        // Flying between neighbors only: c1-c2 and c2-c3, both directions,
        // for each of the two planes.
        let fly_count = task
            .actions
            .iter()
            .filter(|a| a.name.starts_with("fly-"))
            .count();
        assert_eq!(fly_count, 2 * 2 * 2);
        assert_eq!(epsilon_of(&problem).unwrap(), Ratio::new(1, 1000));
    }

    #[test]
    fn chain_too_short_rejected() {
        assert_eq!(
            chain_swap_task(&ChainSwapConfig::new(1)),
            Err(TravelError::ChainTooShort)
        );
    }
}
