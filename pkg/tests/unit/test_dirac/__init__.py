"""Dirac 能谱测试包"""
