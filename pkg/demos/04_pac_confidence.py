"""The sample-size bound and the confidence it buys.

Two directions of the same inequality. Forward: given a target error
rate knob and a bound on how many sequences the learned set may cover,
how many samples are enough? Backward: given that a run used L samples
and covered d sequences, what confidence does that entitle us to?
"""

from pacreach import required_samples, solve_confidence


def main():
    print("samples required, by rate and covered-count bound")
    print(f"{'rate':>8} {'d=10':>8} {'d=100':>8} {'d=1000':>8}")
    for rate in (2, 5, 10, 20, 100):
        row = [required_samples(rate, d) for d in (10, 100, 1000)]
        print(f"{rate:>8} {row[0]:>8} {row[1]:>8} {row[2]:>8}")

    print("\nconfidence achieved by a 1000-sample run, by covered count")
    print(f"{'covered':>8} {'confidence':>12}")
    for covered in (17, 41, 99, 207, 400, 952):
        bound = solve_confidence(1000, covered)
        print(f"{covered:>8} {bound.confidence:>12.4f}")

    # the bound collapses to zero once the covered count is too large
    # for the budget: 1000 samples say nothing about a 952-sequence set

    bound = solve_confidence(1000, 17)
    again = required_samples(bound.inverse_error, 17)
    print(f"\nround trip: 1000 samples at d=17 achieve rate "
          f"{bound.inverse_error:.2f}, which asks for {again} samples")


if __name__ == "__main__":
    main()
