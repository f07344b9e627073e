class HamgridPotentialMistakeWarning(Warning):
    """
    The user did something sketchy that's probably a bad idea, such as handing
    a graph with a degree-1 vertex to a solver.
    """


class HamgridOracleFallbackWarning(Warning):
    """
    No polynomial-time algorithm applies to the input, so the exact oracle was
    used instead.
    """
