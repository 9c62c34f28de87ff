//! A farm planning problem: plant three crops on limited land, then buy or
//! sell under uncertain yields to meet cattle feed targets at minimum loss.
//! First stage: acres planted per crop. Second stage per scenario: purchases
//! (y1, y2) and sales (w1..w4, with two price points for the quota crop).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lp::ConstraintSense;
use crate::two_stage::{AffineCost, CutForm, FirstStageSet, Scenario, TwoStageProblem, VarDomain};

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct YieldScenario {
    /// Multiplier applied to the mean yields.
    pub multiplier: f64,
    pub probability: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FarmerConfig {
    /// $/acre for wheat, corn, beets.
    pub plant_costs: [f64; 3],
    /// $/ton purchase prices for wheat and corn.
    pub purchase_prices: [f64; 2],
    /// $/ton sale prices: wheat, corn, beets under quota, beets above quota.
    pub sale_prices: [f64; 4],
    /// Cattle feed requirements in tons: wheat, corn.
    pub feed_requirements: [f64; 2],
    /// Tons of beets sellable at the favorable price.
    pub beet_quota: f64,
    /// Acres available.
    pub land: f64,
    /// Tons/acre under mean conditions: wheat, corn, beets.
    pub mean_yields: [f64; 3],
    pub scenarios: Vec<YieldScenario>,
}

impl FarmerConfig {
    /// The deterministic mean-yield instance.
    pub fn single_scenario() -> Self {
        FarmerConfig {
            scenarios: vec![YieldScenario {
                multiplier: 1.0,
                probability: 1.0,
            }],
            ..Self::base()
        }
    }

    /// Three equiprobable scenarios: mean yields, 20% above, 20% below.
    pub fn three_scenario() -> Self {
        FarmerConfig {
            scenarios: vec![
                YieldScenario {
                    multiplier: 1.0,
                    probability: 1.0 / 3.0,
                },
                YieldScenario {
                    multiplier: 1.2,
                    probability: 1.0 / 3.0,
                },
                YieldScenario {
                    multiplier: 0.8,
                    probability: 1.0 / 3.0,
                },
            ],
            ..Self::base()
        }
    }

    fn base() -> Self {
        FarmerConfig {
            plant_costs: [150.0, 230.0, 260.0],
            purchase_prices: [238.0, 210.0],
            sale_prices: [170.0, 150.0, 36.0, 10.0],
            feed_requirements: [200.0, 240.0],
            beet_quota: 6000.0,
            land: 500.0,
            mean_yields: [2.5, 3.0, 20.0],
            scenarios: Vec::new(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let nonneg = self
            .plant_costs
            .iter()
            .chain(&self.purchase_prices)
            .chain(&self.sale_prices)
            .chain(&self.feed_requirements)
            .chain(&self.mean_yields)
            .chain([&self.beet_quota, &self.land])
            .all(|&v| v >= 0.0 && v.is_finite());
        if !nonneg {
            return Err(Error::InvalidInput(
                "farmer config: all quantities must be nonnegative and finite".into(),
            ));
        }
        if self.scenarios.is_empty() {
            return Err(Error::InvalidInput(
                "farmer config: at least one yield scenario required".into(),
            ));
        }
        let total: f64 = self.scenarios.iter().map(|s| s.probability).sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidInput(format!(
                "farmer config: scenario probabilities sum to {total}"
            )));
        }
        Ok(())
    }
}

/// Build the two-stage model.
///
/// The theta floor comes from the cash bound of planting the whole farm with
/// the single most profitable crop and selling the harvest, scenario by
/// scenario.
pub fn build_farmer(cfg: &FarmerConfig) -> Result<TwoStageProblem> {
    cfg.validate()?;
    let [buy_wheat, buy_corn] = cfg.purchase_prices;
    let [sell_wheat, sell_corn, sell_beet, sell_beet_excess] = cfg.sale_prices;

    let mut scenarios = Vec::with_capacity(cfg.scenarios.len());
    let mut theta_floor = 0.0;
    for ys in &cfg.scenarios {
        let yields: Vec<f64> = cfg.mean_yields.iter().map(|m| m * ys.multiplier).collect();
        // Variables: y1, y2 (purchases), w1..w4 (sales).
        let q = vec![
            buy_wheat,
            buy_corn,
            -sell_wheat,
            -sell_corn,
            -sell_beet,
            -sell_beet_excess,
        ];
        let w = vec![
            vec![1.0, 0.0, -1.0, 0.0, 0.0, 0.0],
            vec![0.0, 1.0, 0.0, -1.0, 0.0, 0.0],
            vec![0.0, 0.0, 0.0, 0.0, -1.0, -1.0],
            vec![0.0, 0.0, 0.0, 0.0, 1.0, 0.0],
        ];
        let t = vec![
            vec![yields[0], 0.0, 0.0],
            vec![0.0, yields[1], 0.0],
            vec![0.0, 0.0, yields[2]],
            vec![0.0, 0.0, 0.0],
        ];
        let h = vec![
            cfg.feed_requirements[0],
            cfg.feed_requirements[1],
            0.0,
            cfg.beet_quota,
        ];
        let senses = vec![
            ConstraintSense::Ge,
            ConstraintSense::Ge,
            ConstraintSense::Ge,
            ConstraintSense::Le,
        ];
        scenarios.push(Scenario {
            probability: ys.probability,
            q,
            w,
            t,
            h,
            senses,
        });

        let best_revenue_per_acre = (sell_wheat * yields[0])
            .max(sell_corn * yields[1])
            .max(sell_beet * yields[2]);
        theta_floor += ys.probability * (-cfg.land * best_revenue_per_acre);
    }

    Ok(TwoStageProblem {
        g: AffineCost {
            coeffs: cfg.plant_costs.to_vec(),
            constant: 0.0,
        },
        x_set: FirstStageSet {
            rows: vec![vec![1.0, 1.0, 1.0]],
            senses: vec![ConstraintSense::Le],
            rhs: vec![cfg.land],
            domains: vec![VarDomain::Continuous; 3],
        },
        scenarios,
        cut_form: CutForm::DualStandard,
        theta_floor: Some(theta_floor),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::two_stage::evaluate_q;

    #[test]
    fn nothing_planted_means_buying_all_feed() {
        let p = build_farmer(&FarmerConfig::single_scenario()).unwrap();
        let vf = evaluate_q(&p, &[0.0, 0.0, 0.0]).unwrap();
        // 200 tons of wheat at 238 plus 240 tons of corn at 210.
        assert!((vf.q_value - 98_000.0).abs() < 1e-6, "Q(0) = {}", vf.q_value);
    }

    #[test]
    fn theta_floor_bounds_q_from_below() {
        let p = build_farmer(&FarmerConfig::single_scenario()).unwrap();
        let floor = p.theta_floor.unwrap();
        // Selling 500 acres of beets at 36 * 20 per acre.
        assert!((floor - (-360_000.0)).abs() < 1e-9);
        for x in [[0.0, 0.0, 0.0], [500.0, 0.0, 0.0], [120.0, 80.0, 300.0]] {
            let vf = evaluate_q(&p, &x).unwrap();
            assert!(vf.q_value >= floor - 1e-9);
        }
    }

    #[test]
    fn invalid_config_rejected() {
        let mut cfg = FarmerConfig::single_scenario();
        cfg.land = -1.0;
        assert!(build_farmer(&cfg).is_err());
        let mut cfg = FarmerConfig::single_scenario();
        cfg.scenarios[0].probability = 0.5;
        assert!(build_farmer(&cfg).is_err());
    }
}
