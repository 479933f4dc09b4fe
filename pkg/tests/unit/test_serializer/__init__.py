"""序列化测试包"""
