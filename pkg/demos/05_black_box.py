"""Run the whole pipeline against a true black box.

The target here is a subprocess speaking the line protocol (RESET /
STEP / OUT ...); the analysis only sees output tokens and classifies a
run by its final one. Any model file can be served this way, which is
also how the package tests its own client: serve a known machine, learn
it over the wire, compare against the white-box answer.
"""

import sys

from pacreach import BlackBoxConfig, RemoteSafetyQuery, analyze, build_alks

SERVE = (f"{sys.executable} -m pacreach.cli serve-model "
         f"--model alks_without --stdio")


def main():
    config = BlackBoxConfig(
        command=SERVE,
        unsafe_outputs=frozenset({"alarm"}),
        timeout=10.0,
    )
    with RemoteSafetyQuery(config) as sul:
        print(f"handshake: alphabet = {' '.join(sul.input_alphabet)}")
        print(f"one query: is_safe(l r s) = {sul.is_safe(('l', 'r', 's'))}")

        report = analyze(sul, horizon=3, sample_budget=1000, seed=7,
                         model_name="served_lane_keeping")

    print(f"\ncovered sequences: {report.covered_used} "
          f"of {report.total_sequences}")
    print(f"learned probability: {report.learned_probability:.4f}")
    print(f"confidence: {report.confidence:.4f}")
    print(f"baseline estimate: {report.baseline_estimate:.4f}")

    # same pipeline, white box: exact census included, same learned set
    white = analyze(build_alks(False), horizon=3, sample_budget=1000,
                    seed=7)
    assert white.covered_used == report.covered_used
    print(f"\nwhite-box run agrees and adds the exact census: "
          f"{white.exact_safe_paths} safe paths "
          f"(p = {white.exact_probability:.4f})")


if __name__ == "__main__":
    main()
