# Cross-validating the abstraction against exact concrete trajectories.
#
# A trajectory simulated in rational arithmetic generates exactly the
# observation word the quotient predicts; and the formula verdict
# computed on the quotient agrees with the LTL semantics evaluated
# directly on the trajectory's lasso word.  Any mismatch would be a
# soundness bug, so the comparison uses zero tolerance.

from polybisim import (
    Cell,
    LinearSystem,
    ObservedRegion,
    PolyhedralLF,
    build_quotient,
    constraint,
    cross_validate,
    f_star,
    parse_ltl,
    product,
    satisfying_states,
    simulate,
    to_buchi,
)
from polybisim.abstraction import quotient_word

system = LinearSystem.of([["0.5", "0"], ["0", "0.5"]])
lf = PolyhedralLF.of([["1", "0"], ["0", "1"]], rho="0.5")
r1 = ObservedRegion(
    "r1",
    Cell(
        2,
        [
            constraint([1, 0], 3),
            constraint([-1, 0], -2),
            constraint([0, 1], 1),
            constraint([0, -1], 1),
        ],
    ),
)
quotient, partition = build_quotient(system, lf, 1, 4, [r1])

# One concrete trajectory, word shown step by step.
traj = simulate(
    system, partition.x_cell, partition.d_cell, [r1], ["2.5", "0.5"], 10
)
print("trajectory word:", [o.label for o in traj.word])
start_block = partition.cell_of(traj.points[0])
print(
    "quotient word:  ",
    [o.label for o in quotient_word(quotient, start_block)],
)

# Batch validation: block-directed samples, word equivalence plus formula
# verdict equivalence against the lasso oracle.
formula = parse_ltl("F r1", atoms={"r1", "pid"})
prod = product(quotient, to_buchi(formula))
sat = satisfying_states(prod, f_star(prod))
report = cross_validate(
    system,
    quotient,
    partition,
    [r1],
    formula,
    sat.state_ids,
    sample_count=50,
    seed=1,
)
print(report.summary())
for line in report.detail_lines()[:5]:
    print(" ", line)
