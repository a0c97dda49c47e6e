#!/usr/bin/env python3
"""Regenerate tests/cli/golden from the built CLI.

usage: make_goldens.py path/to/bratteli
"""
import shlex
import subprocess
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent / "tests" / "cli"

CASES = {
    "diagram_validate_odometer": "diagram validate data/odometer2.json",
    "diagram_validate_br": "diagram validate data/br.json --depth 3",
    "diagram_validate_explicit": "diagram validate data/explicit.json",
    "diagram_paths_br": "diagram paths data/br.json --depth 4",
    "diagram_telescope_br": "diagram telescope data/br.json --cuts 0,2,4",
    "diagram_simple_explicit": "diagram simple data/explicit.json --bound 4",
    "diagram_simple_br": "diagram simple data/br.json --bound 6",
    "diagram_even_odometer": "diagram even-telescope data/odometer2.json --bound 4",
    "diagram_dot_br": "diagram dot data/br.json --depth 2",
    "diagram_dot_br_collapsed": "diagram dot data/br.json --depth 3 --collapse-multiedges",
    "measure_builtin_br": "measure builtin --diagram data/br.json --depth 3",
    "measure_validate_odometer": "measure validate --diagram data/odometer2.json data/od_measure.json",
    "measure_of_set": "measure of --diagram data/odometer2.json --set data/od_set.json",
    "group_compose": "group compose --diagram data/odometer2.json --element data/od_g.json --element data/od_h.json",
    "group_fix": "group fix --diagram data/odometer2.json --element data/od_g.json",
    "group_support": "group support --diagram data/odometer2.json --element data/od_g.json",
    "group_cycles_br": "group cycles --diagram data/br.json --element data/br_cycle.json",
    "group_conjugate": "group conjugate --diagram data/odometer2.json --element data/od_g.json --element data/od_h.json",
    "group_hn": "group hn --diagram data/odometer2.json --set data/od_half.json --n 3",
    "group_claim1": "group claim1 --p 5",
    "group_si_family": "group si-family --diagram data/odometer8.json --element data/od8_s.json --r 2 --eps 1/2",
    "group_metric": "group metric --diagram data/odometer2.json --element data/od_g.json --element data/od_h.json",
    "char_eval_br": "char eval --diagram data/br.json --character data/chi1.json --element data/br_swap.json",
    "char_eval_br_cycle": "char eval --diagram data/br.json --character data/chi2.json --element data/br_cycle.json",
    "char_eval_measure_file": "char eval --diagram data/odometer2.json --character data/chi_file.json --element data/od_g.json",
    "char_eval_float": "--float --digits 8 char eval --diagram data/br.json --character data/chi2.json --element data/br_cycle.json",
    "char_trace": "char trace --diagram data/odometer2.json --character data/chi1.json --set data/od_set.json",
    "char_gram": "char gram --diagram data/odometer2.json --character data/chi1.json --element data/od_g.json --element data/od_h.json",
    "char_psd_fail": "char psd data/gram_bad.json",
    "char_psd_ok": "char psd data/gram_ok.json",
    "char_central": "char central --diagram data/br.json --character data/chi1.json --element data/br_swap.json --element data/br_cycle.json",
    "char_mult": "char mult --diagram data/odometer2.json --character data/chi1.json --element data/od_g.json --target 1/4 --from 2 --to 5",
    "char_proj_limit": "char proj-limit --diagram data/odometer2.json --character data/chi1.json --set data/od_half.json --from 1 --to 4",
    "char_regular": "char eval --diagram data/br.json --character data/chi_regular.json --element data/br_swap.json",
    "rperm_refine": "rperm refine data/third_cycle.json --m 2",
    "rperm_compose": "rperm compose data/half_swap.json data/third_cycle.json",
    "rperm_fix": "rperm fix data/third_cycle.json",
    "rperm_char": "rperm char data/half_swap.json --alpha 2",
    "rperm_from_br": "rperm from-br --diagram data/br.json data/br_swap.json",
    "rperm_to_br": "rperm from-br --diagram data/br.json data/third_cycle.json --to-br",
    "error_wrong_diagram": "rperm from-br --diagram data/odometer2.json data/od_g.json",
    "error_shape": "char eval --diagram data/br.json --character data/chi1.json --element data/od_g.json",
    "error_missing_file": "diagram validate data/missing.json",
    "usage_missing_option": "char eval --diagram data/br.json",
    "usage_unknown_command": "diagram frobnicate",
}


def run(cli, args):
    proc = subprocess.run([cli, *shlex.split(args)], cwd=ROOT, capture_output=True, text=True)
    return proc.returncode, proc.stdout, proc.stderr


def render(args, code, out, err):
    head = [
        "# generated by tools/make_goldens.py from the built CLI; regenerate, do not edit",
        "# args: " + args,
        "# exit: %d" % code,
    ]
    head += ["# stderr: " + line for line in err.splitlines()]
    return "\n".join(head) + "\n" + out


def main():
    cli = str(Path(sys.argv[1]).resolve())
    out_dir = ROOT / "golden"
    out_dir.mkdir(exist_ok=True)
    for old in out_dir.glob("*.txt"):
        old.unlink()
    for name, args in CASES.items():
        code, out, err = run(cli, args)
        (out_dir / (name + ".txt")).write_text(render(args, code, out, err))
    print("wrote %d snapshots" % len(CASES))


if __name__ == "__main__":
    main()
