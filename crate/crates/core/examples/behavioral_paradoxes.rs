use lap::analysis::{achievable_utility, detect_paradox_of_choice, detect_quality_paradox, Agent};
use lap::instances::{dominance_pair, identical_value, quality_pair, salient_feature};
use lap::model::{biased_gambler_utility, biased_prophet_utility, AgentParams, Sequence};
use lap::{Rational, Scalar};

fn main() -> lap::Result<()> {
    let k = 3;
    let lambda = Rational::from_ratio(1, 2);
    let params = AgentParams::new(lambda.clone(), k)?;
    let q = Rational::from_int(2);

    let same = identical_value(k, &q)?;
    println!("identical value, q = 2:");
    for t in 1..=k {
        println!(
            "  pick {t}: gambler {} prophet {}",
            biased_gambler_utility(&same, t, &params)?.render(),
            biased_prophet_utility(&same, t, &params)?.render()
        );
    }

    let salient = salient_feature(k, &Rational::from_int(1), &q)?;
    println!("salient feature, a = 1:");
    for t in 1..=k {
        println!("  pick {t}: gambler {}", biased_gambler_utility(&salient, t, &params)?.render());
    }

    for lam in [Rational::from_ratio(1, 4), Rational::from_int(1)] {
        let p = AgentParams::new(lam.clone(), k)?;
        let (low, high) = quality_pair(k, &Rational::from_int(3))?;
        let r = detect_quality_paradox(&low, &high, &p)?;
        println!(
            "quality pair at lambda {}: gambler prefers better set {}, prophet worse off {}",
            lam.render(),
            r.gambler_better_on_b,
            r.prophet_worse_on_b
        );
    }

    let (dominated, dominating) = dominance_pair(k, k + 1, &lambda, &Rational::from_ratio(1, 4))?;
    for agent in [Agent::Gambler, Agent::Prophet, Agent::Rational] {
        println!(
            "dominance pair, {agent}: {} vs {}",
            achievable_utility(&dominated, &params, agent)?.render(),
            achievable_utility(&dominating, &params, agent)?.render()
        );
    }

    let base = Sequence::<Rational>::from_rows(&[&[3, 0, 0]])?;
    let more = Sequence::<Rational>::from_rows(&[&[0, 2, 0], &[0, 0, 2], &[3, 0, 0]])?;
    let hurt = detect_paradox_of_choice(&base, &more, &params, Agent::Gambler)?;
    println!("two extra options in front hurt the gambler: {hurt}");
    Ok(())
}
