"""Build a machine, run it, and round-trip it through the text format.

The lane-keeping model has four states: centred, drifted left, drifted
right, and alarm. Steering further into a drift raises the alarm; the
variant with assistance recovers from it in one step.
"""

from pacreach import build_alks, parse_model, serialize_model


def show_run(machine, label, seq):
    run = machine.trace(seq)
    verdict = "safe" if run.safe else "UNSAFE"
    print(f"  {label}: {' '.join(seq)}")
    print(f"    outputs {' '.join(run.output_trace)}, "
          f"ends in {run.final_state} -> {verdict}")


def main():
    plain = build_alks(with_assist=False)
    assisted = build_alks(with_assist=True)

    print("without assistance:")
    show_run(plain, "hold the lane ", ("s", "s", "s"))
    show_run(plain, "drift and back", ("l", "r", "l"))
    show_run(plain, "drift twice   ", ("l", "l", "s"))

    print("with assistance (same inputs):")
    show_run(assisted, "drift twice   ", ("l", "l", "s"))

    # The text format carries everything: round-tripping returns an
    # equal machine.
    text = serialize_model(plain)
    print("\nmodel file form:\n")
    print(text)
    assert parse_model(text) == plain
    print("parsed back, equal to the original")


if __name__ == "__main__":
    main()
