"""
Signals as sums of unit steps
=============================

A transition at time T is h(t-T).  Gates act on these sums through the same
polynomial rules, and a product of steps is the step at the later time.
"""

from hazardscan import SymbolicTime, Waveform, wf_and, wf_delay, wf_eval, wf_not, wf_or

tau = SymbolicTime.of(0, tau=1)

# input switching off at t=5
x = Waveform.step(5, initial=1)
print(x)

# through an inverter with delay tau
nx = wf_delay(wf_not(x), tau)
print(nx)

# h(t-5) h(t-(5+tau)) keeps only the later step
print(wf_and(Waveform.step(5), nx))

# x OR its delayed complement: a short drop between 5 and 5+tau
glitch = wf_or(x, nx)
print(glitch)

# h(0) = 1, so the value at a step time is the new value
for t in (4, 5, 5.5, 6, 7):
    print(t, wf_eval(glitch, t, {"tau": 1}))
