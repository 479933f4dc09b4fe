"""API 测试包"""
