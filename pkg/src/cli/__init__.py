"""
CLI Module

Problem file schemas, subcommands and the ``abeltrace`` entry point.
"""
