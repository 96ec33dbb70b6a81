# Tests Module

